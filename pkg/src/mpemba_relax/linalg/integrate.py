"""Fixed-step fourth-order Runge-Kutta oracle for linear generators."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import InvalidStepError
from mpemba_relax.linalg.spectral import as_complex_matrix

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import ComplexVector, LinearMap

DEFAULT_DT = 1e-3


def matrix_generator(matrix: npt.ArrayLike) -> LinearMap:
    """Wrap a generator matrix as the linear map x -> G x."""
    g = as_complex_matrix(matrix)

    def apply(x: ComplexVector) -> ComplexVector:
        return g @ x

    return apply


def rk4_step(apply: LinearMap, x: ComplexVector, h: float) -> ComplexVector:
    k1 = apply(x)
    k2 = apply(x + 0.5 * h * k1)
    k3 = apply(x + 0.5 * h * k2)
    k4 = apply(x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_integrate(
    generator_apply: LinearMap,
    state0: npt.ArrayLike,
    t_end: float,
    dt: float = DEFAULT_DT,
) -> ComplexVector:
    """Integrate dx/dt = G x from 0 to `t_end` with classical RK4.

    Steps are exactly `dt` long except the last, which is shortened to land on `t_end`.

    Raises:
        InvalidStepError: If `dt` is not strictly positive or `t_end` is negative.

    """
    if dt <= 0:
        msg = f"step must be positive, got {dt}"
        raise InvalidStepError(msg, field="dt")
    if t_end < 0:
        msg = f"end time must be nonnegative, got {t_end}"
        raise InvalidStepError(msg, field="t_end")
    x = np.array(state0, dtype=np.complex128).reshape(-1)
    if t_end == 0:
        return x
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    t = 0.0
    for k in range(1, steps + 1):
        t_next = t_end if k == steps else k * dt
        x = rk4_step(generator_apply, x, t_next - t)
        t = t_next
    return x
