"""
File-based pipeline and batch comparison
========================================

The same steps the ``fecg-anc`` command runs: read a recording, extract
with several algorithms, detect, score, and write CSV traces, peak files,
key=value reports and SVG plots.
"""

import os
from pathlib import Path

from fecg_anc import datasets
from fecg_anc.pipeline import PipelineConfig, run_batch

OUT = Path(os.environ.get("FECG_ANC_OUTPUT_DIR", "demo_out")) / "batch"

cfg = PipelineConfig(input=str(datasets.synthetic_record_path()),
                     annotation=str(datasets.synthetic_annotation_path()),
                     output_dir=str(OUT))
print(cfg.to_text())

art = run_batch(cfg)
for rank, (alg, snr) in enumerate(art.ranking, 1):
    rep = art.results[alg].report
    print(f"{rank}. {alg:8s} SNR {snr:8.3f} dB  Se {rep.sensitivity}  F1 {rep.f1}")

#############################################################################
# Everything lands in one directory; rerunning produces identical bytes.

for p in sorted(OUT.iterdir()):
    print(f"{p.stat().st_size:9d}  {p.name}")

#############################################################################
# Equivalent command line:
#
#   fecg-anc batch --input <record> --annotation <peaks> --output-dir out
