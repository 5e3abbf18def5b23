"""Two-mode Mpemba criterion S_n for pairs of dot states and the crossing time it implies."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import DegenerateDifferenceError, DivisionBlockedError, OutOfDomainError
from mpemba_relax.linalg import propagate
from mpemba_relax.qdot.analytic import (
    FAST_MODE,
    SLOW_MODE,
    SPIN_MODE,
    DotSpectralData,
    SignConvention,
    dot_spectral_data,
    evolve_dot,
)
from mpemba_relax.qdot.model import BathPair, DotParams, DotState, steady_population_grid
from mpemba_relax.scan.crossings import first_crossing

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import RealMatrix, RealVector

log = logging.getLogger(__name__)

TERM_TOL = 1e-12
DEFAULT_HORIZON = 50.0
DEFAULT_SAMPLES = 2000

_ANTISPIN = np.array([-1.0, 1.0, 1.0, -1.0]) / 2.0


class PreparingPairing(StrEnum):
    """How the four preparing potentials are assigned to the two initial states.

    `by_state`: state I from (mu1, mu2), state II from (mu3, mu4).
    `by_side`: state I from (mu1, mu3), state II from (mu2, mu4).
    """

    BY_STATE = "by_state"
    BY_SIDE = "by_side"


@dataclass(frozen=True, slots=True)
class PreparingTemplate:
    """Fixed preparing potentials mu1 and mu3; mu2 and mu4 are scanned."""

    mu1: float = 2.0
    mu3: float = 1.0
    temperature: float = 1.0
    pairing: PreparingPairing = PreparingPairing.BY_STATE

    def baths(self, mu2: float, mu4: float) -> tuple[BathPair, BathPair]:
        t = self.temperature
        if self.pairing is PreparingPairing.BY_STATE:
            return BathPair(self.mu1, mu2, t, t), BathPair(self.mu3, mu4, t, t)
        return BathPair(self.mu1, self.mu3, t, t), BathPair(mu2, mu4, t, t)

    def population_grid(
        self, params: DotParams, mu2: float, mu4: npt.ArrayLike
    ) -> tuple[RealMatrix, RealMatrix]:
        """Initial populations of states I and II over an array of mu4 values."""
        mu4_arr = np.asarray(mu4, dtype=np.float64)
        t = self.temperature
        if self.pairing is PreparingPairing.BY_STATE:
            rho_i = steady_population_grid(params, self.mu1, mu2, t)
            rho_ii = steady_population_grid(params, self.mu3, mu4_arr, t)
        else:
            rho_i = steady_population_grid(params, self.mu1, self.mu3, t)
            rho_ii = steady_population_grid(params, mu2, mu4_arr, t)
        return np.broadcast_to(rho_i, rho_ii.shape), rho_ii


@dataclass(frozen=True, slots=True)
class CriterionResult:
    """S_n = numerator / denominator with the Mpemba predicate -1 < S_n < 0."""

    element: int
    value: float
    numerator: float
    denominator: float

    @property
    def in_regime(self) -> bool:
        return -1.0 < self.value < 0.0


def check_element(element: int) -> int:
    if element not in (1, 2, 3, 4):
        msg = f"element index must be 1..4, got {element}"
        raise OutOfDomainError(msg, field="element")
    return element


def criterion_terms(
    data: DotSpectralData,
    delta: npt.ArrayLike,
    element: int,
    convention: SignConvention = SignConvention.EXACT,
) -> tuple[RealVector, RealVector]:
    """Numerator R[n,3] da_3 and denominator R[n,4] da_4 for rows of population differences."""
    r = data.right_matrix_for(convention)
    amplitudes = np.asarray(delta, dtype=np.float64) @ data.left_matrix.T
    row = check_element(element) - 1
    return r[row, SLOW_MODE] * amplitudes[..., SLOW_MODE], r[row, FAST_MODE] * amplitudes[
        ..., FAST_MODE
    ]


def _is_antispin(delta: RealVector) -> bool:
    norm = float(np.linalg.norm(delta))
    if norm <= TERM_TOL:
        return True
    residual = delta - (delta @ _ANTISPIN) * _ANTISPIN
    return float(np.linalg.norm(residual)) <= TERM_TOL * max(1.0, norm)


def mpemba_criterion(
    params: DotParams,
    rho_i: DotState,
    rho_ii: DotState,
    element: int,
    convention: SignConvention = SignConvention.EXACT,
) -> CriterionResult:
    """Ratio of the slow-mode to the fastest-mode contribution to rho_n^I - rho_n^II.

    Raises:
        DegenerateDifferenceError: If the states coincide, differ along (-1, 1, 1, -1),
            or both terms vanish.
        DivisionBlockedError: If only the denominator vanishes.

    """
    check_element(element)
    delta = rho_i.populations - rho_ii.populations
    if _is_antispin(delta):
        msg = "state difference has no component outside (-1, 1, 1, -1)"
        raise DegenerateDifferenceError(msg)
    data = dot_spectral_data(params)
    num, den = (float(x) for x in criterion_terms(data, delta, element, convention))
    if abs(num) <= TERM_TOL and abs(den) <= TERM_TOL:
        msg = f"both criterion terms vanish for element {element}"
        raise DegenerateDifferenceError(msg)
    if abs(den) <= TERM_TOL:
        msg = f"criterion denominator vanishes for element {element}"
        raise DivisionBlockedError(msg)
    return CriterionResult(element, num / den, num, den)


def dot_crossing_time(
    params: DotParams,
    rho_i: DotState,
    rho_ii: DotState,
    element: int,
    convention: SignConvention = SignConvention.EXACT,
    horizon: float = DEFAULT_HORIZON,
    samples: int = DEFAULT_SAMPLES,
) -> float | None:
    """First time rho_n^I(t) = rho_n^II(t), or None.

    Under the exact convention, spin-symmetric pairs inside the regime use
    t* = ln(-1/S_n) / (lambda_3 - lambda_4). Every other pair, and every pair under the
    legacy convention, is located by bracketing the propagated difference over
    (0, horizon]. Legacy S_n does not describe the trajectories, so it never sets t*.
    """
    result = mpemba_criterion(params, rho_i, rho_ii, element, convention)
    data = dot_spectral_data(params)
    delta = rho_i.populations - rho_ii.populations
    spin_symmetric = abs(float(data.left_matrix[SPIN_MODE] @ delta)) <= TERM_TOL

    if convention is SignConvention.EXACT and spin_symmetric and result.in_regime:
        gap = data.eigenvalues[SLOW_MODE] - data.eigenvalues[FAST_MODE]
        return math.log(-1.0 / result.value) / gap
    log.debug("bracketing rho_%d crossing (%s S=%.6g)", element, convention, result.value)

    grid = np.linspace(0.0, horizon, samples)
    traj_i = evolve_dot(params, rho_i, grid).populations
    traj_ii = evolve_dot(params, rho_ii, grid).populations
    decomp = data.as_decomposition()
    row = element - 1

    def difference(t: float) -> float:
        return float(propagate(decomp, delta, t)[row].real)

    return first_crossing(grid, traj_i[:, row], traj_ii[:, row], difference)
