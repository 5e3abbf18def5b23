"""Small dense complex linear algebra: eigensystems, propagation and an RK4 oracle."""

from mpemba_relax.linalg.integrate import DEFAULT_DT, matrix_generator, rk4_integrate
from mpemba_relax.linalg.spectral import (
    MAX_DIM,
    RESIDUAL_TOL,
    ModeCoefficients,
    SpectralDecomposition,
    as_complex_matrix,
    as_complex_vector,
    as_time_grid,
    eigendecompose,
    mode_coefficients,
    null_vector,
    propagate,
    propagate_many,
)

__all__ = [
    "DEFAULT_DT",
    "MAX_DIM",
    "RESIDUAL_TOL",
    "ModeCoefficients",
    "SpectralDecomposition",
    "as_complex_matrix",
    "as_complex_vector",
    "as_time_grid",
    "eigendecompose",
    "matrix_generator",
    "mode_coefficients",
    "null_vector",
    "propagate",
    "propagate_many",
    "rk4_integrate",
]
