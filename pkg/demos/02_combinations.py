"""
Convex combinations of two adaptive filters
===========================================

A combination runs a fast and a slow filter side by side and mixes their
outputs with ``eta = sigmoid(a)``. The mixing parameter ``a`` follows the
gradient of the combined error and is clipped to ``[-a_plus, a_plus]``.

We first show the tracking behaviour on a plant that flips sign halfway,
then compare the three combinations on the recording.
"""

import os
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fecg_anc import datasets, make_combination, read_recording, run_combination, snr_db
from fecg_anc.pipeline import PipelineConfig, preprocess
from fecg_anc.signals import tap_matrix

OUT = Path(os.environ.get("FECG_ANC_OUTPUT_DIR", "demo_out"))
OUT.mkdir(exist_ok=True)

#############################################################################
# A 4-tap plant in white noise that changes sign at sample 2000. The
# forgetting component (lambda = 0.995) re-adapts quickly; the
# infinite-memory one (lambda = 1) does not, so eta moves towards 1.

rng = np.random.default_rng(7)
x = rng.standard_normal(3000)
w = rng.uniform(-1, 1, 4)
U = tap_matrix(x, 4)
d = U @ w
d[2000:] = -(U[2000:] @ w)
d += 0.05 * rng.standard_normal(d.size)

run = run_combination(d, x, make_combination("crls", 4, lam1=0.995, lam2=1.0))
print(f"mean eta before the flip {run.eta[1500:2000].mean():.3f}, "
      f"after {run.eta[2200:3000].mean():.3f}")

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
ax1.semilogy(run.e1 ** 2 + 1e-12, lw=0.5, label="lambda=0.995")
ax1.semilogy(run.e2 ** 2 + 1e-12, lw=0.5, label="lambda=1")
ax1.legend()
ax1.set_ylabel("squared error")
ax2.plot(run.eta)
ax2.set_ylabel("eta")
ax2.set_xlabel("sample")
fig.savefig(OUT / "tracking.png", dpi=100)

#############################################################################
# On the recording, each combination is compared with its components.

rec = read_recording(datasets.synthetic_record_path())
cfg = PipelineConfig()
d = preprocess(rec.channel(1), cfg)
x = preprocess(rec.channel(7), cfg)
for variant in ("clms", "rls-lms", "crls"):
    r = run_combination(d, x, make_combination(variant, 10))
    snrs = [snr_db(e[25:], (d.samples - e)[25:]) for e in (r.e, r.e1, r.e2)]
    print(f"{variant:8s} combined {snrs[0]:7.3f} dB  components {snrs[1]:7.3f} / {snrs[2]:7.3f} dB"
          f"  final eta {r.eta[-1]:.3f}")
