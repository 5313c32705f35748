"""
Single adaptive filters on an abdominal lead
============================================

Cancel the maternal ECG in abdominal lead 2 using thoracic lead 8 as the
noise reference, with LMS, NLMS and RLS. The bundled record is simulated;
point ``RECORD`` at the real DaISy file to repeat this on measured data.
"""

import sys
from pathlib import Path

import numpy as np

from fecg_anc import LMS, NLMS, RLS, datasets, read_recording, run_filter, snr_db
from fecg_anc.pipeline import PipelineConfig, preprocess

RECORD = Path(sys.argv[1]) if len(sys.argv) > 1 else datasets.synthetic_record_path()
rec = read_recording(RECORD)
print(f"{RECORD.name}: {rec.n_samples} samples x {rec.n_channels} leads at {rec.fs:g} Hz")

# mean removal and peak scaling, as the pipeline does by default
cfg = PipelineConfig()
d = preprocess(rec.channel(1), cfg)
x = preprocess(rec.channel(7), cfg)

#############################################################################
# Ten taps per filter. The residual e is the fetal estimate; the filter
# output y is the maternal estimate. A lower SNR(e, y) means more of the
# abdominal lead was explained by the reference.

filters = {
    "LMS": LMS(10, mu=0.01),
    "NLMS": NLMS(10, mu=1.0),
    "RLS": RLS(10, lam=0.999, delta=100.0),
}
burn_in = 25
for name, filt in filters.items():
    run = run_filter(d, x, filt)
    snr = snr_db(run.e[burn_in:], run.y[burn_in:])
    print(f"{name:5s} SNR {snr:8.3f} dB   steady MSE {np.mean(run.e[burn_in:] ** 2):.3e}")

#############################################################################
# Filters are stateful objects, so they can also be stepped one sample at a
# time, e.g. to follow a live stream.

rls = RLS(10)
U = np.lib.stride_tricks.sliding_window_view(np.r_[np.zeros(9), x.samples], 10)[:, ::-1]
for n in range(5):
    out = rls.step(U[n], d.samples[n])
    print(f"n={n}  y={out.y:+.4f}  e={out.e:+.4f}")
