"""Exception hierarchy shared by every stage of the extraction pipeline."""

from __future__ import annotations


class AncError(Exception):
    """Base class for all errors raised by ``fecg_anc``."""


class InputError(AncError, ValueError):
    """Rejected input: empty signals, non-finite samples, too few rows."""


class ContractError(AncError, ValueError):
    """A caller broke a precondition, e.g. mismatched dimensions or rates."""


class DivergenceError(AncError, FloatingPointError):
    """A filter state became non-finite.

    ``step`` holds the zero-based sample index at which it happened.
    """

    def __init__(self, message: str, step: int | None = None):
        if step is not None:
            message = f"{message} (step {step})"
        super().__init__(message)
        self.step = step


class ConditioningError(DivergenceError):
    """RLS gain denominator ``1 + u^T pi`` was not positive."""


class ConfigError(AncError, ValueError):
    """Invalid run or detector configuration."""


class ParseError(AncError, ValueError):
    """Malformed recording, peak list or config text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UndefinedMetricError(AncError, ZeroDivisionError):
    """A metric's denominator vanished (e.g. zero-power filter output)."""


class InsufficientDataError(AncError, ValueError):
    """Not enough peaks or samples to compute the requested quantity."""


class FetchError(AncError, OSError):
    """Dataset download or post-download validation failed."""
