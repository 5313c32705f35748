"""
Pan-Tompkins R-peak detection
=============================

Stages: zero-phase band-pass (cascaded 2nd-order low-pass and high-pass
difference equations), five-point derivative, squaring, centred moving
window integration, then dual adaptive thresholds with search-back and
T-wave rejection. Each accepted integrator peak is moved to the largest
absolute band-passed sample within ``refine_ms``.

Two presets ship: :data:`MATERNAL` (classical adult parameters) and
:data:`FETAL` (wider band, shorter windows for heart rates up to ~180 bpm).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import signal as sps

from .errors import ConfigError, ContractError, InsufficientDataError, ParseError
from .signals import Signal


@dataclass(frozen=True)
class DetectorConfig:
    low_hz: float = 5.0
    high_hz: float = 15.0
    window_ms: float = 80.0
    refractory_ms: float = 200.0
    t_wave_ms: float = 360.0
    refine_ms: float = 40.0
    learn_s: float = 2.0
    # running-estimate weights and threshold placement
    peak_weight: float = 0.125
    searchback_weight: float = 0.25
    threshold_frac: float = 0.25
    searchback_rr: float = 1.66

    def validate(self, fs: float) -> None:
        if not 0 < self.low_hz < self.high_hz:
            raise ConfigError(f"need 0 < low < high, got {self.low_hz}, {self.high_hz}")
        if not self.high_hz < fs / 2:
            raise ConfigError(f"high corner {self.high_hz} Hz is not below Nyquist ({fs / 2} Hz)")
        for name in ("window_ms", "refractory_ms", "refine_ms", "learn_s"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.t_wave_ms < 0:
            raise ConfigError("t_wave_ms must be >= 0")


MATERNAL = DetectorConfig()
FETAL = DetectorConfig(low_hz=10.0, high_hz=30.0, window_ms=50.0,
                       refractory_ms=72.0, t_wave_ms=180.0)
PRESETS = {"maternal": MATERNAL, "fetal": FETAL}


def preset(name: str, **overrides) -> DetectorConfig:
    try:
        cfg = PRESETS[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown detector preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(cfg, **overrides) if overrides else cfg


@dataclass(frozen=True)
class PeakList:
    """Strictly increasing R-peak sample indices at rate ``fs``."""

    indices: np.ndarray
    fs: float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if idx.size and (idx[0] < 0 or np.any(np.diff(idx) <= 0)):
            raise ContractError("peak indices must be non-negative and strictly increasing")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "fs", float(self.fs))

    def __len__(self) -> int:
        return self.indices.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.indices / self.fs

    def __eq__(self, other):
        if not isinstance(other, PeakList):
            return NotImplemented
        return self.fs == other.fs and np.array_equal(self.indices, other.indices)

    __hash__ = None


def biquad_lowpass(fc: float, fs: float) -> tuple[np.ndarray, np.ndarray]:
    """2nd-order Butterworth low-pass ``(b, a)`` via the bilinear transform.

    ``a[0] == 1``; the difference equation is
    ``y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]``.
    """
    w0 = 2 * math.pi * fc / fs
    c, alpha = math.cos(w0), math.sin(w0) / math.sqrt(2)
    b = np.array([(1 - c) / 2, 1 - c, (1 - c) / 2])
    a = np.array([1 + alpha, -2 * c, 1 - alpha])
    return b / a[0], a / a[0]


def biquad_highpass(fc: float, fs: float) -> tuple[np.ndarray, np.ndarray]:
    """2nd-order Butterworth high-pass, same conventions as the low-pass."""
    w0 = 2 * math.pi * fc / fs
    c, alpha = math.cos(w0), math.sin(w0) / math.sqrt(2)
    b = np.array([(1 + c) / 2, -(1 + c), (1 + c) / 2])
    a = np.array([1 + alpha, -2 * c, 1 - alpha])
    return b / a[0], a / a[0]


def bandpass_sections(cfg: DetectorConfig, fs: float) -> np.ndarray:
    """Second-order sections (low-pass then high-pass) for the band-pass."""
    cfg.validate(fs)
    lb, la = biquad_lowpass(cfg.high_hz, fs)
    hb, ha = biquad_highpass(cfg.low_hz, fs)
    return np.array([np.r_[lb, la], np.r_[hb, ha]])


def bandpass(x: np.ndarray, cfg: DetectorConfig, fs: float) -> np.ndarray:
    """Zero-phase band-pass: the cascade is run forward and then backward."""
    return sps.sosfiltfilt(bandpass_sections(cfg, fs), x)


def derivative(x: np.ndarray, fs: float) -> np.ndarray:
    """Centred five-point derivative ``(-x[n-2] - 2x[n-1] + 2x[n+1] + x[n+2]) fs / 8``."""
    p = np.pad(x, 2, mode="edge")
    return (-p[:-4] - 2 * p[1:-3] + 2 * p[3:-1] + p[4:]) * (fs / 8.0)


def integrate(x: np.ndarray, width: int) -> np.ndarray:
    """Centred moving average over ``width`` samples."""
    return np.convolve(x, np.ones(width) / width, mode="same")


@dataclass
class _Stages:
    filtered: np.ndarray
    slope: np.ndarray
    integrated: np.ndarray


def _stages(x: np.ndarray, cfg: DetectorConfig, fs: float) -> _Stages:
    filtered = bandpass(x - x.mean(), cfg, fs)
    slope = derivative(filtered, fs)
    width = max(1, int(round(cfg.window_ms * fs / 1000.0)))
    return _Stages(filtered, slope, integrate(slope * slope, width))


def pan_tompkins(s, cfg: DetectorConfig = MATERNAL, fs: float | None = None) -> PeakList:
    """Detect R peaks in ``s`` (a :class:`Signal`, or an array plus ``fs``)."""
    if isinstance(s, Signal):
        x, fs = s.samples, s.fs
    else:
        if fs is None:
            raise ContractError("fs is required when passing a bare array")
        x = np.asarray(s, dtype=np.float64)
    cfg.validate(fs)
    n = x.shape[0]
    if n < 2 * fs:
        warnings.warn(f"only {n / fs:.2f} s of signal; thresholds learn from the first 2 s",
                      stacklevel=2)
    if n < 13 or np.ptp(x) == 0:
        return PeakList(np.empty(0, dtype=np.int64), fs)

    st = _stages(x, cfg, fs)
    integ = st.integrated
    refractory = int(round(cfg.refractory_ms * fs / 1000.0))
    t_wave = int(round(cfg.t_wave_ms * fs / 1000.0))
    half_qrs = max(1, int(round(cfg.window_ms * fs / 2000.0)))
    cand, _ = sps.find_peaks(integ, distance=max(1, refractory))
    if cand.size == 0:
        return PeakList(np.empty(0, dtype=np.int64), fs)

    # training phase: signal level from per-second maxima, noise from the mean
    learn = integ[: max(1, min(n, int(cfg.learn_s * fs)))]
    sec = max(1, int(fs))
    spk = float(np.median([c.max() for c in np.array_split(learn, max(1, len(learn) // sec))]))
    npk = 0.5 * float(learn.mean())
    w, wb, frac = cfg.peak_weight, cfg.searchback_weight, cfg.threshold_frac

    def max_slope(i):
        lo, hi = max(0, i - half_qrs), min(n, i + half_qrs + 1)
        return np.abs(st.slope[lo:hi]).max()

    qrs: list[int] = []
    qrs_slope = 0.0
    rr: list[int] = []
    pending: list[int] = []  # sub-threshold candidates since the last beat

    def accept(i, weight):
        nonlocal spk, qrs_slope
        # intervals inside the T-wave window are too short to be a rhythm
        if qrs and i - qrs[-1] >= t_wave:
            rr.append(i - qrs[-1])
            del rr[:-8]
        qrs.append(i)
        qrs_slope = max_slope(i)
        spk = weight * integ[i] + (1 - weight) * spk
        pending.clear()

    def search_back(limit):
        # recover the strongest missed beat once the gap outgrows the RR rhythm
        nonlocal npk
        if not qrs or not rr:
            return
        thr2 = 0.5 * (npk + frac * (spk - npk))
        if limit - qrs[-1] <= cfg.searchback_rr * np.median(rr):
            return
        ok = [j for j in pending if integ[j] > thr2 and j - qrs[-1] >= refractory
              and limit - j >= refractory]
        if ok:
            accept(max(ok, key=lambda j: integ[j]), wb)

    for i in cand:
        search_back(i)
        thr1 = npk + frac * (spk - npk)
        if qrs and i - qrs[-1] < refractory:
            continue
        if integ[i] > thr1:
            if qrs and i - qrs[-1] < t_wave and max_slope(i) < 0.5 * qrs_slope:
                npk = w * integ[i] + (1 - w) * npk
                continue
            accept(i, w)
        else:
            npk = w * integ[i] + (1 - w) * npk
            pending.append(i)
    search_back(n + refractory)

    refine = max(1, int(round(cfg.refine_ms * fs / 1000.0)))
    mag = np.abs(st.filtered)
    peaks: list[int] = []
    for i in qrs:
        lo, hi = max(0, i - refine), min(n, i + refine + 1)
        p = lo + int(np.argmax(mag[lo:hi]))
        if peaks and p - peaks[-1] < refractory:
            if mag[p] > mag[peaks[-1]]:
                peaks[-1] = p
            continue
        peaks.append(p)
    return PeakList(np.array(peaks, dtype=np.int64), fs)


def heart_rate(p: PeakList) -> float:
    """Mean heart rate in beats per minute from first to last peak."""
    if len(p) < 2:
        raise InsufficientDataError("heart rate needs at least two peaks")
    span = int(p.indices[-1] - p.indices[0])
    return 60.0 * p.fs * (len(p) - 1) / span


def format_peaks(p: PeakList, header: str | None = None) -> str:
    """One ``<index>\\t<seconds>`` line per peak, optional ``#`` header."""
    lines = []
    if header:
        lines += ["# " + h if h else "#" for h in header.splitlines()]
    lines += [f"{i}\t{i / p.fs:.6f}" for i in p.indices.tolist()]
    return "\n".join(lines) + "\n"


def parse_peaks(text: str, fs: float) -> tuple[PeakList, str]:
    """Inverse of :func:`format_peaks`; returns the peaks and header text."""
    idx, header = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            header.append(line[1:].strip())
            continue
        fields = line.split()
        try:
            idx.append(int(fields[0]))
        except ValueError:
            raise ParseError(f"bad sample index {fields[0]!r}", lineno) from None
    try:
        peaks = PeakList(np.array(idx, dtype=np.int64), fs)
    except ContractError as exc:
        raise ParseError(str(exc)) from None
    return peaks, "\n".join(header)
