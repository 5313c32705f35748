"""Reading, writing and downloading multichannel ASCII recordings.

The on-disk layout is the DaISy one: whitespace-separated columns, one line
per time instant, optionally led by a time column in seconds.
"""

from __future__ import annotations

import gzip
import os
import urllib.error
import urllib.request
from pathlib import Path

import numpy as np

from .errors import FetchError, InputError, ParseError
from .signals import MultichannelRecording

DAISY_URL = "https://homes.esat.kuleuven.be/~smc/daisy/daisydata/foetal_ecg.dat.gz"
DAISY_ROLES = ("abdominal",) * 5 + ("thoracic",) * 3


def _looks_like_time(col: np.ndarray) -> bool:
    step = np.diff(col)
    if step.size == 0 or np.any(step <= 0):
        return False
    return bool(np.max(np.abs(step - np.median(step))) <= 0.01 * np.median(step))


def parse_recording(text: str, fs: float = 250.0, time_column: bool | None = None,
                    roles=None) -> MultichannelRecording:
    """Parse whitespace-delimited ASCII samples.

    A leading time column is detected when the first column is strictly
    increasing with uniform spacing; force it with ``time_column``. An
    8-channel recording gets the DaISy roles (five abdominal, three
    thoracic) unless ``roles`` is given.
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = line.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError(f"expected {width} columns, found {len(tokens)}", lineno)
        try:
            rows.append([float(t) for t in tokens])
        except ValueError as exc:
            raise ParseError(f"non-numeric token ({exc})", lineno) from None
    if len(rows) < 2:
        raise InputError(f"recording needs at least 2 samples, found {len(rows)}")
    data = np.array(rows)
    if not np.all(np.isfinite(data)):
        raise ParseError("non-finite sample value")
    if time_column is None:
        time_column = data.shape[1] > 1 and _looks_like_time(data[:, 0])
    if time_column:
        data = data[:, 1:]
    if data.shape[1] < 1:
        raise ParseError("no channel columns")
    if roles is None:
        roles = DAISY_ROLES if data.shape[1] == 8 else ()
    return MultichannelRecording(data, fs, tuple(roles))


def serialize_recording(rec: MultichannelRecording, time_column: bool = True) -> str:
    """Write ``rec`` so that :func:`parse_recording` restores it exactly."""
    lines = []
    for n, row in enumerate(rec.data):
        vals = [repr(float(v)) for v in row]
        if time_column:
            vals.insert(0, repr(n / rec.fs))
        lines.append(" ".join(vals))
    return "\n".join(lines) + "\n"


def read_recording(path, fs: float = 250.0, **kw) -> MultichannelRecording:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return parse_recording(raw.decode("ascii", errors="strict"), fs, **kw)


def fetch_dataset(dest, url: str = DAISY_URL, timeout: float = 30.0) -> Path:
    """Download the DaISy foetal ECG record to ``dest`` and validate it.

    Gzip payloads are decompressed. The file must parse to 2500 x 8.
    """
    dest = Path(dest)
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            raw = resp.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise FetchError(f"could not download {url}: {exc}") from exc
    if raw[:2] == b"\x1f\x8b":
        try:
            raw = gzip.decompress(raw)
        except OSError as exc:
            raise FetchError(f"corrupt gzip payload from {url}") from exc
    try:
        rec = parse_recording(raw.decode("ascii"))
    except (UnicodeDecodeError, ParseError, InputError) as exc:
        raise FetchError(f"downloaded file is not a valid recording: {exc}") from exc
    if rec.data.shape != (2500, 8):
        raise FetchError(f"expected a 2500 x 8 recording, got {rec.data.shape[0]} x {rec.data.shape[1]}")
    dest.parent.mkdir(parents=True, exist_ok=True)
    tmp = dest.with_name(dest.name + ".part")
    tmp.write_bytes(raw)
    os.replace(tmp, dest)
    return dest
