"""
Single adaptive filters
=======================

LMS, NLMS and RLS transversal filters written as per-sample state machines.
Every filter exposes ``step(u, d)`` which returns the a-priori output and
error (computed with the weights *before* the update) and then adapts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, ContractError, DivergenceError
from .signals import Regressor, Signal, tap_matrix

DEFAULT_ORDER = 10
DEFAULT_DELTA = 100.0


@dataclass(frozen=True)
class StepOutput:
    y: float
    e: float


def _taps(u, order: int) -> np.ndarray:
    taps = u.taps if isinstance(u, Regressor) else np.asarray(u, dtype=np.float64)
    if taps.shape != (order,):
        raise ContractError(f"regressor has shape {taps.shape}, filter order is {order}")
    return taps


class AdaptiveFilter:
    """Common bookkeeping: weights, order and the step counter."""

    def __init__(self, order: int = DEFAULT_ORDER, w=None):
        if order < 1:
            raise ContractError(f"filter order must be >= 1, got {order}")
        self.order = int(order)
        self.w = np.zeros(self.order) if w is None else np.array(w, dtype=np.float64)
        if self.w.shape != (self.order,):
            raise ContractError(f"initial weights must have length {self.order}")
        self.n = 0

    def _check(self):
        if not np.all(np.isfinite(self.w)):
            raise DivergenceError(f"{type(self).__name__} weights diverged", self.n)

    def step(self, u, d: float) -> StepOutput:
        raise NotImplementedError

    def name(self) -> str:
        return type(self).__name__


class LMS(AdaptiveFilter):
    """Least mean squares: ``w <- w + mu * e * u``."""

    def __init__(self, order: int = DEFAULT_ORDER, mu: float = 0.01, w=None):
        if not mu > 0:
            raise ContractError(f"LMS step size must be positive, got {mu}")
        super().__init__(order, w)
        self.mu = float(mu)

    def step(self, u, d):
        u = _taps(u, self.order)
        y = float(self.w @ u)
        e = d - y
        self.w += (self.mu * e) * u
        self._check()
        self.n += 1
        return StepOutput(y, e)


class NLMS(AdaptiveFilter):
    """Normalised LMS: ``w <- w + mu * e * u / (eps + u^T u)``.

    ``eps`` keeps the update finite for an all-zero regressor; ``eps=0`` is
    accepted for exact one-step fits but then a zero regressor skips the
    update instead of dividing by zero.
    """

    def __init__(self, order: int = DEFAULT_ORDER, mu: float = 1.0, eps: float = 1e-6, w=None):
        if not 0 < mu < 2:
            raise ContractError(f"NLMS step size must lie in (0, 2), got {mu}")
        if eps < 0:
            raise ContractError(f"NLMS regulariser must be >= 0, got {eps}")
        super().__init__(order, w)
        self.mu = float(mu)
        self.eps = float(eps)

    def step(self, u, d):
        u = _taps(u, self.order)
        y = float(self.w @ u)
        e = d - y
        norm = self.eps + float(u @ u)
        if norm > 0:
            self.w += (self.mu * e / norm) * u
        self._check()
        self.n += 1
        return StepOutput(y, e)


class RLS(AdaptiveFilter):
    """Exponentially weighted recursive least squares.

    Parameters
    ----------
    order : int
        Number of taps ``M``.
    lam : float
        Forgetting factor in ``(0, 1]``.
    delta : float
        ``P(0) = delta * I``.
    """

    def __init__(self, order: int = DEFAULT_ORDER, lam: float = 0.999,
                 delta: float = DEFAULT_DELTA, w=None):
        if not 0 < lam <= 1:
            raise ContractError(f"forgetting factor must lie in (0, 1], got {lam}")
        if not delta > 0:
            raise ContractError(f"P initialisation delta must be positive, got {delta}")
        super().__init__(order, w)
        self.lam = float(lam)
        self.delta = float(delta)
        self.P = self.delta * np.eye(self.order)

    def step(self, u, d):
        u = _taps(u, self.order)
        pi = (self.P @ u) / self.lam
        denom = 1.0 + float(u @ pi)
        if not denom > 0:
            raise ConditioningError(f"RLS gain denominator {denom!r} is not positive", self.n)
        k = pi / denom
        y = float(self.w @ u)
        e = d - y
        self.w += k * e
        P = (self.P - np.outer(k, u @ self.P)) / self.lam
        self.P = 0.5 * (P + P.T)
        self._check()
        if not np.all(np.isfinite(self.P)):
            raise DivergenceError("RLS inverse correlation matrix diverged", self.n)
        self.n += 1
        return StepOutput(y, e)


def make_filter(algorithm: str, order: int = DEFAULT_ORDER, **params) -> AdaptiveFilter:
    """Build a single filter by name (``lms``, ``nlms`` or ``rls``)."""
    kinds = {"lms": LMS, "nlms": NLMS, "rls": RLS}
    try:
        cls = kinds[algorithm.lower()]
    except KeyError:
        raise ContractError(f"unknown single filter {algorithm!r}") from None
    return cls(order, **params)


@dataclass
class FilterRunResult:
    y: np.ndarray
    e: np.ndarray
    w: np.ndarray
    fs: float = 250.0


def _stream(desired, reference):
    d = desired.samples if isinstance(desired, Signal) else np.asarray(desired, dtype=np.float64)
    x = reference.samples if isinstance(reference, Signal) else np.asarray(reference, dtype=np.float64)
    if d.shape != x.shape:
        raise ContractError(f"desired has {d.shape[0]} samples, reference {x.shape[0]}")
    fs = desired.fs if isinstance(desired, Signal) else 250.0
    if isinstance(desired, Signal) and isinstance(reference, Signal) and desired.fs != reference.fs:
        raise ContractError("desired and reference sampling rates differ")
    return d, x, fs


def run_filter(desired, reference, filt: AdaptiveFilter) -> FilterRunResult:
    """Stream ``reference`` through ``filt`` to cancel it from ``desired``.

    The error sequence ``e`` is the interference-cancelled signal.
    """
    d, x, fs = _stream(desired, reference)
    U = tap_matrix(x, filt.order)
    y = np.empty_like(d)
    e = np.empty_like(d)
    for n in range(d.shape[0]):
        out = filt.step(U[n], d[n])
        y[n] = out.y
        e[n] = out.e
    return FilterRunResult(y, e, filt.w.copy(), fs)
