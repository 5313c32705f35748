"""
Combinations of two adaptive filters
====================================

Two component filters run side by side on the same ``(u, d)`` stream. Their
outputs are mixed as ``eta * y1 + (1 - eta) * y2`` where ``eta = sigmoid(a)``
and the mixing parameter ``a`` follows a stochastic gradient on the squared
combined error. ``a`` is confined to ``[-a_plus, a_plus]``; on the boundary
``eta`` is pinned to exactly 0 or 1.

Variants: ``clms`` (two LMS), ``crls`` (two RLS) and ``rls-lms``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractError, DivergenceError
from .filters import DEFAULT_DELTA, DEFAULT_ORDER, LMS, RLS, AdaptiveFilter, _stream, _taps
from .signals import tap_matrix

DEFAULT_MU_A = 100.0
DEFAULT_A_PLUS = 4.0

VARIANT_DEFAULTS = {
    "clms": {"mu1": 0.05, "mu2": 0.005},
    "crls": {"lam1": 0.98, "lam2": 0.9995},
    "rls-lms": {"lam": 0.999, "mu": 0.01},
}


def sigmoid_mixing(a: float) -> float:
    return 1.0 / (1.0 + math.exp(-a))


def _eta(a: float, a_plus: float) -> float:
    if a <= -a_plus:
        return 0.0
    if a >= a_plus:
        return 1.0
    return sigmoid_mixing(a)


@dataclass(frozen=True)
class ComboStepOutput:
    y: float
    e: float
    y1: float
    y2: float
    e1: float
    e2: float
    eta_used: float
    w_combined: np.ndarray = field(repr=False)


class Combination:
    """Convex combination of two component filters with an adaptive mixer.

    Parameters
    ----------
    comp1, comp2 : AdaptiveFilter
        Component filters of equal order. By convention ``comp1`` is the
        fast one.
    mu_a : float
        Step size of the mixing-parameter update; must be large so the mixer
        adapts faster than either component.
    a_plus : float
        Bound on ``|a|``.
    a0 : float
        Initial mixing parameter.
    """

    def __init__(self, comp1: AdaptiveFilter, comp2: AdaptiveFilter,
                 mu_a: float = DEFAULT_MU_A, a_plus: float = DEFAULT_A_PLUS,
                 a0: float = 0.0, variant: str | None = None):
        if comp1.order != comp2.order:
            raise ContractError(f"component orders differ: {comp1.order} vs {comp2.order}")
        if comp1 is comp2:
            raise ContractError("components must be distinct filter instances")
        if mu_a < 0:
            raise ConfigError(f"mu_a must be >= 0, got {mu_a}")
        if not a_plus > 0:
            raise ConfigError(f"a_plus must be positive, got {a_plus}")
        if abs(a0) > a_plus:
            raise ConfigError(f"|a0|={abs(a0)} exceeds a_plus={a_plus}")
        self.comp1 = comp1
        self.comp2 = comp2
        self.order = comp1.order
        self.mu_a = float(mu_a)
        self.a_plus = float(a_plus)
        self.a = float(a0)
        self.eta = _eta(self.a, self.a_plus)
        self.variant = variant
        self.n = 0

    def step(self, u, d: float) -> ComboStepOutput:
        u = _taps(u, self.order)
        eta = self.eta
        # component outputs come back a priori (pre-update weights)
        out1 = self.comp1.step(u, d)
        out2 = self.comp2.step(u, d)
        y1, y2 = out1.y, out2.y
        y = eta * y1 + (1.0 - eta) * y2
        e = d - y

        e_alpha = e * (y1 - y2)
        # On the clamp boundary eta is exactly 0/1 and eta*(1-eta) would
        # freeze the mixer for good; use the sigmoid slope at a instead.
        s = sigmoid_mixing(self.a) if eta in (0.0, 1.0) else eta
        a = self.a + self.mu_a * e_alpha * s * (1.0 - s)
        if not math.isfinite(a):
            raise DivergenceError("mixing parameter diverged", self.n)
        a = min(max(a, -self.a_plus), self.a_plus)
        self.a = a
        self.eta = _eta(a, self.a_plus)
        self.n += 1
        w = self.eta * self.comp1.w + (1.0 - self.eta) * self.comp2.w
        return ComboStepOutput(y, e, y1, y2, out1.e, out2.e, eta, w)

    @property
    def w(self) -> np.ndarray:
        return self.eta * self.comp1.w + (1.0 - self.eta) * self.comp2.w


def make_combination(variant: str, order: int = DEFAULT_ORDER, *,
                     mu_a: float = DEFAULT_MU_A, a_plus: float = DEFAULT_A_PLUS,
                     a0: float = 0.0, delta: float = DEFAULT_DELTA,
                     **params) -> Combination:
    """Build a zero-initialised combination.

    ``params`` override the variant defaults: ``mu1, mu2`` for ``clms``,
    ``lam1, lam2`` for ``crls`` and ``lam, mu`` for ``rls-lms``. The fast
    component always goes first.
    """
    variant = variant.lower().replace("_", "-").replace("+", "-")
    if variant not in VARIANT_DEFAULTS:
        raise ConfigError(f"unknown combination variant {variant!r}")
    unknown = set(params) - set(VARIANT_DEFAULTS[variant])
    if unknown:
        raise ConfigError(f"parameters {sorted(unknown)} do not apply to {variant}")
    p = {**VARIANT_DEFAULTS[variant], **params}
    if variant == "clms":
        if not p["mu1"] > p["mu2"] > 0:
            raise ConfigError(f"CLMS needs mu1 > mu2 > 0, got mu1={p['mu1']}, mu2={p['mu2']}")
        c1, c2 = LMS(order, p["mu1"]), LMS(order, p["mu2"])
    elif variant == "crls":
        if not 0 < p["lam1"] < p["lam2"] <= 1:
            raise ConfigError(f"CRLS needs lam1 < lam2 <= 1, got lam1={p['lam1']}, lam2={p['lam2']}")
        c1, c2 = RLS(order, p["lam1"], delta), RLS(order, p["lam2"], delta)
    else:
        if not 0 < p["lam"] <= 1 or not p["mu"] > 0:
            raise ConfigError(f"RLS-LMS needs lam in (0, 1] and mu > 0, got {p}")
        c1, c2 = RLS(order, p["lam"], delta), LMS(order, p["mu"])
    return Combination(c1, c2, mu_a=mu_a, a_plus=a_plus, a0=a0, variant=variant)


@dataclass
class CombinationRunResult:
    y: np.ndarray
    e: np.ndarray
    eta: np.ndarray
    a: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    w: np.ndarray
    fs: float = 250.0


def run_combination(desired, reference, combo: Combination) -> CombinationRunResult:
    """Stream a recording pair through ``combo``.

    ``eta[n]`` is the mixing coefficient applied at sample ``n``; ``a[n]``
    is the mixing parameter after the update at sample ``n``.
    """
    d, x, fs = _stream(desired, reference)
    U = tap_matrix(x, combo.order)
    N = d.shape[0]
    rec = {k: np.empty(N) for k in ("y", "e", "eta", "a", "y1", "y2", "e1", "e2")}
    for n in range(N):
        out = combo.step(U[n], d[n])
        rec["y"][n] = out.y
        rec["e"][n] = out.e
        rec["eta"][n] = out.eta_used
        rec["a"][n] = combo.a
        rec["y1"][n] = out.y1
        rec["y2"][n] = out.y2
        rec["e1"][n] = out.e1
        rec["e2"][n] = out.e2
    return CombinationRunResult(w=combo.w.copy(), fs=fs, **rec)
