"""Exception hierarchy for the relaxation engine."""

from __future__ import annotations


class MpembaError(Exception):
    """Base exception for engine and configuration errors."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.field = field

    def __str__(self) -> str:
        if self.field:
            return f"{self.field}: {self.message}"
        return self.message


# =============================================================================
# Linear algebra
# =============================================================================


class NonConvergenceError(MpembaError):
    """Raised when the eigensolver fails to converge."""


class DefectiveMatrixError(MpembaError):
    """Raised when no biorthonormal eigenvector system meets the residual tolerance."""


class DimensionMismatchError(MpembaError):
    """Raised when a vector does not match the dimension of a decomposition."""


class InvalidStepError(MpembaError):
    """Raised when an integrator step is not strictly positive."""


class NoNullSpaceError(MpembaError):
    """Raised when a generator has no zero eigenvalue."""


# =============================================================================
# Models
# =============================================================================


class NonPositiveTemperatureError(MpembaError):
    """Raised when a bath temperature is zero or negative."""


class SingularOccupationError(MpembaError):
    """Raised when occupation factors hit a pole of the closed-form eigenvectors."""


class ConsistencyError(MpembaError):
    """Raised when the analytic left/right eigenvector product is not diagonal."""


class DegenerateDifferenceError(MpembaError):
    """Raised when the two initial states have no resolvable slow-mode difference."""


class DivisionBlockedError(MpembaError):
    """Raised when the criterion denominator vanishes but the numerator does not."""


class DegenerateSpectrumError(MpembaError):
    """Raised when equal site energies meet zero tunneling."""


class OutOfDomainError(MpembaError):
    """Raised when an operation is called outside the case it is defined for."""


class NotADensityMatrixError(MpembaError):
    """Raised when a matrix is not Hermitian, unit-trace, or positive."""


# =============================================================================
# Scans
# =============================================================================


class GridMismatchError(MpembaError):
    """Raised when two series are sampled on different time grids."""


class NoBracketError(MpembaError):
    """Raised when no sign change brackets a boundary root."""


class NotFoundError(MpembaError):
    """Raised when a threshold search finds no transition in its range."""


# =============================================================================
# Configuration
# =============================================================================


class ConfigError(MpembaError):
    """Raised for invalid or incomplete experiment configuration."""
