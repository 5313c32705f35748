"""Signal containers, the tap-delay regressor and basic preprocessing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractError, InputError

ROLES = ("abdominal", "thoracic", "unknown")


def _as_samples(values, name: str = "signal") -> np.ndarray:
    x = np.array(values, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(x)):
        raise InputError(f"{name} contains non-finite samples")
    return x


@dataclass(frozen=True)
class Signal:
    """A finite, real, uniformly sampled signal.

    Parameters
    ----------
    samples : array_like
        Sample values; copied to a read-only float64 array.
    fs : float
        Sampling frequency in Hz.
    """

    samples: np.ndarray
    fs: float = 250.0

    def __post_init__(self):
        x = _as_samples(self.samples)
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        if not (np.isfinite(self.fs) and self.fs > 0):
            raise InputError(f"sampling frequency must be positive, got {self.fs}")
        object.__setattr__(self, "fs", float(self.fs))

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.fs

    def with_samples(self, samples) -> "Signal":
        return Signal(samples, self.fs)


@dataclass(frozen=True)
class MultichannelRecording:
    """An ``N x C`` recording whose channels share length and rate.

    ``data[:, c]`` is channel ``c`` (zero-based); ``roles[c]`` labels it as
    abdominal, thoracic or unknown.
    """

    data: np.ndarray
    fs: float = 250.0
    roles: tuple[str, ...] = field(default=())

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise InputError("recording must be a 2-D samples x channels array")
        if not np.all(np.isfinite(data)):
            raise InputError("recording contains non-finite samples")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        if not (np.isfinite(self.fs) and self.fs > 0):
            raise InputError(f"sampling frequency must be positive, got {self.fs}")
        object.__setattr__(self, "fs", float(self.fs))
        roles = tuple(self.roles) or ("unknown",) * data.shape[1]
        if len(roles) != data.shape[1]:
            raise InputError(f"{len(roles)} roles given for {data.shape[1]} channels")
        bad = set(roles) - set(ROLES)
        if bad:
            raise InputError(f"unknown channel roles: {sorted(bad)}")
        object.__setattr__(self, "roles", roles)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    def channel(self, index: int) -> Signal:
        """Zero-based channel accessor."""
        if not 0 <= index < self.n_channels:
            raise ContractError(
                f"channel {index} out of range for {self.n_channels} channels"
            )
        return Signal(self.data[:, index], self.fs)

    def __eq__(self, other):
        if not isinstance(other, MultichannelRecording):
            return NotImplemented
        return (
            self.fs == other.fs
            and self.roles == other.roles
            and np.array_equal(self.data, other.data)
        )

    __hash__ = None


class Regressor:
    """Tap-delay line holding the ``order`` most recent samples, newest first.

    Before ``order`` samples have been pushed the missing taps are zero.
    """

    def __init__(self, order: int, taps: Sequence[float] | None = None):
        if order < 1:
            raise ContractError(f"regressor order must be >= 1, got {order}")
        self.order = int(order)
        self.taps = np.zeros(self.order)
        if taps is not None:
            taps = _as_samples(taps, "taps")
            if taps.shape[0] != self.order:
                raise ContractError(f"expected {self.order} taps, got {taps.shape[0]}")
            self.taps[:] = taps

    def push(self, x: float) -> "Regressor":
        if not np.isfinite(x):
            raise InputError(f"cannot push non-finite sample {x!r}")
        self.taps[1:] = self.taps[:-1]
        self.taps[0] = x
        return self

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Regressor(order={self.order}, taps={self.taps.tolist()})"


def tap_matrix(x, order: int) -> np.ndarray:
    """Stack every regressor state of a stream into an ``N x order`` array.

    Row ``n`` equals the taps of a :class:`Regressor` after pushing
    ``x[0], ..., x[n]``.
    """
    x = _as_samples(x)
    if order < 1:
        raise ContractError(f"regressor order must be >= 1, got {order}")
    padded = np.concatenate([np.zeros(order - 1), x])
    windows = np.lib.stride_tricks.sliding_window_view(padded, order)
    return np.ascontiguousarray(windows[:, ::-1])


def remove_mean(s: Signal) -> Signal:
    if len(s) == 0:
        raise InputError("cannot remove the mean of an empty signal")
    return s.with_samples(s.samples - s.samples.mean())


def power(s) -> float:
    """Mean squared amplitude ``(1/N) sum x^2``; accepts a Signal or array."""
    x = s.samples if isinstance(s, Signal) else _as_samples(s)
    if x.shape[0] == 0:
        raise InputError("power of an empty signal is undefined")
    return float(np.mean(x * x))
