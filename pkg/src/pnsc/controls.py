"""Shared numeric controls and the package exception taxonomy."""

from __future__ import annotations

from dataclasses import dataclass


class PnscError(Exception):
    """Base class for all package errors."""


class DomainError(PnscError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NonConvergenceError(PnscError, ArithmeticError):
    """A series or quadrature failed to reach the requested tolerance."""


class ConfigError(PnscError, ValueError):
    """Malformed run configuration (bad key, bad value, bad schema)."""


class ValidationFailure(PnscError):
    """A statistical validation check did not pass."""


class FormatError(PnscError, ValueError):
    """A data file does not match its documented layout."""


@dataclass(frozen=True, slots=True)
class SeriesControl:
    """Truncation policy for series evaluation.

    max_terms mirrors the empirical ceiling beyond which the alternating
    stable-law series lose more digits to cancellation than they gain.
    """

    max_terms: int = 400
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive and finite")


@dataclass(frozen=True, slots=True)
class QuadControl:
    """Adaptive-quadrature policy.

    oscillatory_split=True makes Bessel/trig-weighted integrals split at
    successive zeros of the weight and sum the panel series with acceleration.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    oscillatory_split: bool = True

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive and finite")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_SERIES = SeriesControl()
DEFAULT_QUAD = QuadControl()
