"""Locations of the bundled synthetic record and of the real DaISy record."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

DAISY_ENV = "FECG_ANC_DAISY"
DAISY_ANNOTATION_ENV = "FECG_ANC_DAISY_ANNOTATIONS"


def data_dir() -> Path:
    return Path(str(resources.files("fecg_anc") / "data"))


def synthetic_record_path() -> Path:
    """2500 x 8 simulated abdominal/thoracic record (time column + 8 leads)."""
    return data_dir() / "synthetic_foetal_ecg.dat"


def synthetic_annotation_path() -> Path:
    """Exact fetal R-peak positions of the synthetic record."""
    return data_dir() / "synthetic_fetal_peaks.txt"


def daisy_path() -> Path | None:
    """The real DaISy ``foetal_ecg.dat`` if one is available, else ``None``.

    Looked up in ``$FECG_ANC_DAISY`` first, then ``data/foetal_ecg.dat``.
    """
    env = os.environ.get(DAISY_ENV)
    for cand in ([Path(env)] if env else []) + [data_dir() / "foetal_ecg.dat"]:
        if cand.is_file():
            return cand
    return None


def daisy_annotation_path(channel: int) -> Path | None:
    """Fetal peak annotation for DaISy abdominal ``channel`` (1-based), if present.

    ``$FECG_ANC_DAISY_ANNOTATIONS`` may point at a directory holding
    ``daisy_fetal_peaks_ch<k>.txt`` files.
    """
    name = f"daisy_fetal_peaks_ch{channel}.txt"
    env = os.environ.get(DAISY_ANNOTATION_ENV)
    for cand in ([Path(env) / name] if env else []) + [data_dir() / name]:
        if cand.is_file():
            return cand
    return None
