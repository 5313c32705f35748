"""Regenerate the bundled synthetic record and its fetal annotation."""

from fecg_anc import datasets
from fecg_anc.qrs import PeakList, format_peaks
from fecg_anc.recording import serialize_recording
from fecg_anc.synthetic import maternal_fetal_recording

sim = maternal_fetal_recording()
datasets.synthetic_record_path().write_text(serialize_recording(sim.recording))
header = ("fetal R-wave centres of synthetic_foetal_ecg.dat\n"
          "provenance: exact, from fecg_anc.synthetic.maternal_fetal_recording(seed=2500)\n"
          "applies to every abdominal channel")
peaks = PeakList(sim.fetal_peaks, sim.recording.fs)
datasets.synthetic_annotation_path().write_text(format_peaks(peaks, header))
print(sim.recording.data.shape, len(peaks), "fetal beats")
