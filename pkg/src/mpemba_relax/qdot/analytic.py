"""Closed-form eigensystem of the dot transition matrix and spectral evolution."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import ConsistencyError, SingularOccupationError
from mpemba_relax.linalg import SpectralDecomposition, as_time_grid, propagate_many
from mpemba_relax.qdot.model import (
    DotParams,
    DotState,
    DotTrajectory,
    OccupationFactors,
    build_transition_matrix,
    occupation_factors,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import RealMatrix, RealVector

log = logging.getLogger(__name__)

GUARD = 1e-12
DIAGONAL_TOL = 1e-9

# Mode indices (0-based) in the closed-form column order
STEADY_MODE = 0
SPIN_MODE = 1
SLOW_MODE = 2
FAST_MODE = 3


class SignConvention(StrEnum):
    """Sign of rows 2 and 3 in the third right-eigenvector column.

    `exact` is an eigenvector of the transition matrix. `legacy` flips rows 2 and 3 as
    the column is commonly tabulated; it changes the sign of S_2 and S_3 only.
    """

    EXACT = "exact"
    LEGACY = "legacy"


@dataclass(frozen=True, slots=True)
class DotSpectralData:
    """Eigenvalues with right (columns) and left (rows) eigenvectors, L.R = I."""

    occupations: OccupationFactors
    gamma: float
    eigenvalues: RealVector
    right_matrix: RealMatrix
    left_matrix: RealMatrix

    def right_matrix_for(self, convention: SignConvention) -> RealMatrix:
        r = np.array(self.right_matrix)
        if convention is SignConvention.LEGACY:
            r[1:3, SLOW_MODE] *= -1
        return r

    def as_decomposition(self) -> SpectralDecomposition:
        m = build_transition_matrix(self.occupations, self.gamma)
        right = self.right_matrix.astype(np.complex128)
        left = self.left_matrix.astype(np.complex128)
        lam = self.eigenvalues.astype(np.complex128)
        residual = max(
            float(np.max(np.abs(m @ right - right * lam))),
            float(np.max(np.abs(left @ right - np.eye(4)))),
        )
        return SpectralDecomposition(lam, right, left, residual)


def _check_guards(f0: float, f1: float) -> None:
    if f0 <= GUARD:
        msg = f"f0={f0:.3g} too close to 0"
        raise SingularOccupationError(msg, field="f0")
    if f1 <= GUARD:
        msg = f"f1={f1:.3g} too close to 0"
        raise SingularOccupationError(msg, field="f1")
    if abs(f0 - f1) >= 2 - GUARD:
        msg = f"|f0 - f1| = {abs(f0 - f1):.3g} too close to 2"
        raise SingularOccupationError(msg, field="f1")


def analytic_spectral_data(f: OccupationFactors, gamma: float = 1.0) -> DotSpectralData:
    """Closed-form eigensystem sorted as (0, -(2-d), -(2+d), -4) with d = f0 - f1.

    Raises:
        SingularOccupationError: If f0 or f1 is within 1e-12 of 0 or |f0 - f1| of 2.
        ConsistencyError: If L.R is not diagonal within 1e-9.

    """
    f0, f1 = f.f0, f.f1
    _check_guards(f0, f1)
    d = f0 - f1
    g = 2 - f0 - f1

    right = np.empty((4, 4))
    right[:, STEADY_MODE] = np.array([f0 * f1, f0 * (2 - f1), f0 * (2 - f1), (2 - f0) * (2 - f1)])
    right[:, STEADY_MODE] /= 4 + 2 * d
    right[:, SPIN_MODE] = [0.0, -0.5, 0.5, 0.0]
    right[:, SLOW_MODE] = np.array([2 * f0 * f1, f0 * g, f0 * g, -2 * f0 * (2 - f0)]) / (d * d - 4)
    right[:, FAST_MODE] = f0 * f1 / (4 - 2 * d) * np.array([1.0, -1.0, -1.0, 1.0])

    left = np.array(
        [
            [1.0, 1.0, 1.0, 1.0],
            [0.0, -1.0, 1.0, 0.0],
            [-(2 - f1) / f0, -g / (2 * f0), -g / (2 * f0), 1.0],
            [(2 - f0) * (2 - f1) / (f0 * f1), -(2 - f0) / f0, -(2 - f0) / f0, 1.0],
        ]
    )

    product = left @ right
    diag = np.diag(product)
    off = product - np.diag(diag)
    if np.max(np.abs(off)) > DIAGONAL_TOL * max(1.0, float(np.max(np.abs(diag)))):
        msg = f"L.R is not diagonal (off-diagonal {np.max(np.abs(off)):.3g})"
        raise ConsistencyError(msg)
    left /= diag[:, None]

    eigenvalues = gamma * np.array([0.0, -(2 - d), -(2 + d), -4.0])
    return DotSpectralData(f, gamma, eigenvalues, right, left)


def dot_spectral_data(params: DotParams) -> DotSpectralData:
    return analytic_spectral_data(occupation_factors(params), params.gamma)


def evolve_dot(params: DotParams, rho0: DotState, times: npt.ArrayLike) -> DotTrajectory:
    """Propagate `rho0` under the relaxation baths.

    rho(t) = sum_n exp(lambda_n t) R[:, n] a_n with a = L.rho(0).
    """
    t = as_time_grid(times)
    data = dot_spectral_data(params)
    samples = propagate_many(data.as_decomposition(), rho0.populations, t).real
    log.debug(
        "evolve_dot samples=%d trace error=%.3g",
        t.size,
        float(np.max(np.abs(samples.sum(axis=1) - 1.0))),
    )
    return DotTrajectory(t, samples)
