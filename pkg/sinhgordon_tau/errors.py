# sinhgordon_tau/errors.py
from __future__ import annotations


class DomainError(ValueError):
    """Input outside the domain an operation is defined on."""


class ConfigError(ValueError):
    """Unreadable or inconsistent settings."""


class FitError(ValueError):
    """Least-squares fit cannot be trusted (window too narrow, singular basis)."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature did not meet its tolerance."""


class SolverError(RuntimeError):
    """Backward integration stopped early. ``t`` is where it gave up."""

    def __init__(self, message: str, t: float | None = None) -> None:
        super().__init__(message if t is None else f"{message} (at t={t:.6g})")
        self.t = t


# --- warning categories ---

class SinhGordonWarning(UserWarning):
    pass


class BoundaryDataWarning(SinhGordonWarning):
    pass


class PrecisionWarning(SinhGordonWarning):
    pass


class ExcludedRegionWarning(SinhGordonWarning):
    pass


class QuadratureWarning(SinhGordonWarning):
    pass
