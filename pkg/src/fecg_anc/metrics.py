"""Output-to-residual SNR, running MSE, peak matching and detection scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .errors import ContractError, InputError, UndefinedMetricError
from .signals import power

DEFAULT_MATCH_TOL_MS = 50.0


def snr_db(fecg_estimate, filter_output) -> float:
    """``10 log10(P(fecg_estimate) / P(filter_output))``.

    ``fecg_estimate`` is the cancellation residual ``e`` and ``filter_output``
    the interference estimate ``y``; lower values mean more interference was
    captured by the filter. Trim any burn-in before calling.
    """
    e = np.asarray(getattr(fecg_estimate, "samples", fecg_estimate), dtype=np.float64)
    y = np.asarray(getattr(filter_output, "samples", filter_output), dtype=np.float64)
    if e.shape != y.shape:
        raise ContractError(f"length mismatch: {e.shape[0]} vs {y.shape[0]}")
    p_out = power(y)
    if p_out == 0:
        raise UndefinedMetricError("filter output has zero power")
    p_res = power(e)
    if p_res == 0:
        raise UndefinedMetricError("residual has zero power; SNR is -inf")
    return float(10.0 * np.log10(p_res / p_out))


def mse_curve(e) -> np.ndarray:
    """Running mean of squared error, ``MSE(n) = (1/n) sum_{i<=n} e(i)^2``."""
    e = np.asarray(e, dtype=np.float64).reshape(-1)
    if e.shape[0] == 0:
        raise InputError("MSE of an empty error sequence")
    return np.cumsum(e * e) / np.arange(1, e.shape[0] + 1)


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    pairs: tuple[tuple[int, int], ...] = field(default=())


def match_peaks(reference, detected, tol_ms: float = DEFAULT_MATCH_TOL_MS,
                fs: float | None = None) -> MatchResult:
    """Greedy nearest-neighbour matching of detected to reference peaks.

    Detected peaks are visited in increasing time order; each one claims the
    closest still-unmatched reference peak within ``tol_ms``. ``reference``
    and ``detected`` are PeakLists or index arrays (then ``fs`` is needed).
    """
    if tol_ms <= 0:
        raise ContractError(f"matching tolerance must be positive, got {tol_ms}")
    rfs = getattr(reference, "fs", fs)
    dfs = getattr(detected, "fs", fs)
    if rfs is None or dfs is None:
        raise ContractError("sampling rate unknown; pass PeakLists or fs=")
    if rfs != dfs:
        raise ContractError(f"sampling rates differ: {rfs} vs {dfs}")
    ref = np.asarray(getattr(reference, "indices", reference), dtype=np.int64)
    det = np.sort(np.asarray(getattr(detected, "indices", detected), dtype=np.int64))
    tol = tol_ms * rfs / 1000.0
    used = np.zeros(ref.shape[0], dtype=bool)
    pairs = []
    for p in det:
        if ref.shape[0] == 0:
            break
        dist = np.abs(ref - p).astype(np.float64)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] <= tol:
            used[j] = True
            pairs.append((int(ref[j]), int(p)))
    tp = len(pairs)
    return MatchResult(tp, int(det.shape[0]) - tp, int(ref.shape[0]) - tp, tuple(pairs))


def _pct(num: int, den: int) -> float | None:
    if den == 0:
        return None
    return round2(100.0 * num / den)


def round2(x: float) -> float:
    """Half-up rounding to two decimals, as printed in result tables."""
    return float(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class DetectionReport:
    """Percentages rounded half-up to 2 decimals; ``None`` when undefined."""

    tp: int
    fp: int
    fn: int
    sensitivity: float | None
    ppv: float | None
    accuracy: float | None
    f1: float | None

    def as_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "sensitivity": self.sensitivity, "ppv": self.ppv,
            "accuracy": self.accuracy, "f1": self.f1,
        }


def detection_report(m: MatchResult) -> DetectionReport:
    tp, fp, fn = m.tp, m.fp, m.fn
    if min(tp, fp, fn) < 0:
        raise ContractError("match counts must be non-negative")
    # harmonic mean of Se and PPV == 2TP/(2TP+FP+FN); absent when Se+PPV == 0
    f1 = _pct(2 * tp, 2 * tp + fp + fn) if tp > 0 else None
    return DetectionReport(
        tp, fp, fn,
        sensitivity=_pct(tp, tp + fn),
        ppv=_pct(tp, tp + fp),
        accuracy=_pct(tp, tp + fp + fn),
        f1=f1,
    )
