"""Four-state quantum dot between two fermionic baths in the wide-band limit.

States are ordered (doubly occupied, spin up, spin down, empty). Rates are in units of
the decay rate and energies in units of k_B T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import OutOfDomainError
from mpemba_relax.fermi import check_temperature, fermi, fermi_grid

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import ComplexMatrix, RealMatrix, RealVector

STATE_TOL = 1e-9
STATE_LABELS = ("rho1", "rho2", "rho3", "rho4")


# =============================================================================
# Types
# =============================================================================


@dataclass(frozen=True, slots=True)
class BathPair:
    """Chemical potentials and temperatures of the left and right reservoirs."""

    mu_left: float
    mu_right: float
    t_left: float = 1.0
    t_right: float = 1.0

    def __post_init__(self) -> None:
        check_temperature(self.t_left, field="t_left")
        check_temperature(self.t_right, field="t_right")

    @classmethod
    def biased(cls, mean: float, bias: float, temperature: float = 1.0) -> BathPair:
        """Baths at mean +/- bias sharing one temperature."""
        return cls(mean + bias, mean - bias, temperature, temperature)

    @classmethod
    def equilibrium(cls, mu: float, temperature: float = 1.0) -> BathPair:
        return cls(mu, mu, temperature, temperature)


@dataclass(frozen=True, slots=True)
class DotParams:
    epsilon0: float
    u: float
    relax_baths: BathPair
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.u < 0:
            msg = f"repulsion energy must be nonnegative, got {self.u}"
            raise OutOfDomainError(msg, field="u")
        if not self.gamma > 0:
            msg = f"decay rate must be positive, got {self.gamma}"
            raise OutOfDomainError(msg, field="gamma")


@dataclass(frozen=True, slots=True)
class OccupationFactors:
    """Sums of the two baths' Fermi factors at eps0 (f0) and eps0 + U (f1)."""

    f0: float
    f1: float

    def __post_init__(self) -> None:
        for name in ("f0", "f1"):
            value = getattr(self, name)
            if not 0.0 <= value <= 2.0:  # noqa: PLR2004
                msg = f"occupation sum must lie in [0, 2], got {value}"
                raise OutOfDomainError(msg, field=name)


@dataclass(frozen=True, slots=True)
class DotState:
    populations: RealVector

    def __post_init__(self) -> None:
        p = np.array(self.populations, dtype=np.float64).reshape(-1)
        if p.shape != (4,):
            msg = f"dot state needs 4 populations, got {p.shape[0]}"
            raise OutOfDomainError(msg, field="populations")
        if np.any(p < -STATE_TOL) or np.any(p > 1 + STATE_TOL):
            msg = f"populations must lie in [0, 1], got {p.tolist()}"
            raise OutOfDomainError(msg, field="populations")
        if abs(p.sum() - 1.0) > STATE_TOL:
            msg = f"populations must sum to 1, got {p.sum():.12g}"
            raise OutOfDomainError(msg, field="populations")
        p.setflags(write=False)
        object.__setattr__(self, "populations", p)


@dataclass(frozen=True, slots=True)
class DotTrajectory:
    """Population samples; row k of `populations` belongs to `times[k]`."""

    times: RealVector
    populations: RealMatrix = field(repr=False)

    def state(self, index: int) -> DotState:
        return DotState(self.populations[index])


# =============================================================================
# Operations
# =============================================================================


def fermi_sum(energy: float, baths: BathPair) -> float:
    """Return the sum of the left and right Fermi factors at `energy`, in (0, 2)."""
    return fermi(energy, baths.mu_left, baths.t_left) + fermi(
        energy, baths.mu_right, baths.t_right
    )


def occupation_factors(params: DotParams, baths: BathPair | None = None) -> OccupationFactors:
    """Occupation sums against `baths`, defaulting to the relaxation baths."""
    b = baths or params.relax_baths
    return OccupationFactors(
        fermi_sum(params.epsilon0, b), fermi_sum(params.epsilon0 + params.u, b)
    )


def build_transition_matrix(f: OccupationFactors, gamma: float = 1.0) -> ComplexMatrix:
    """Rate matrix of the population master equation; every column sums to zero."""
    f0, f1 = f.f0, f.f1
    m = np.array(
        [
            [-2 * (2 - f1), f1, f1, 0],
            [2 - f1, -2 + f0 - f1, 0, f0],
            [2 - f1, 0, -2 + f0 - f1, f0],
            [0, 2 - f0, 2 - f0, -2 * f0],
        ],
        dtype=np.complex128,
    )
    return gamma * m


def steady_populations(f0: npt.ArrayLike, f1: npt.ArrayLike) -> RealMatrix:
    """Closed-form steady state for scalar or array occupation sums.

    The last axis of the result holds the four populations.
    """
    a = np.asarray(f0, dtype=np.float64)
    b = np.asarray(f1, dtype=np.float64)
    weights = np.stack([a * b, a * (2 - b), a * (2 - b), (2 - a) * (2 - b)], axis=-1)
    return weights / (4 + 2 * (a - b))[..., None]


def steady_state(params: DotParams, baths: BathPair | None = None) -> DotState:
    f = occupation_factors(params, baths)
    return DotState(steady_populations(f.f0, f.f1))


def prepare_initial_state(params: DotParams, preparing_baths: BathPair) -> DotState:
    """Steady state of the preparing baths, used as the state at t = 0."""
    return steady_state(params, preparing_baths)


def steady_population_grid(
    params: DotParams,
    mu_left: npt.ArrayLike,
    mu_right: npt.ArrayLike,
    temperature: float = 1.0,
) -> RealMatrix:
    """Vectorized `prepare_initial_state` over arrays of preparing chemical potentials."""
    eps0, eps1 = params.epsilon0, params.epsilon0 + params.u
    f0 = fermi_grid(eps0, mu_left, temperature) + fermi_grid(eps0, mu_right, temperature)
    f1 = fermi_grid(eps1, mu_left, temperature) + fermi_grid(eps1, mu_right, temperature)
    return steady_populations(f0, f1)

