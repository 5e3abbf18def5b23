"""Two tunnel-coupled fermionic sites, each attached to its own reservoir."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import DegenerateSpectrumError, OutOfDomainError
from mpemba_relax.fermi import check_temperature, fermi

if TYPE_CHECKING:
    from mpemba_relax.types import ComplexMatrix, RealMatrix

SUM_TOL = 1e-9
BOUND_TOL = 1e-6
DEGENERACY_TOL = 1e-12


class StateOrdering(StrEnum):
    """Index order of the four energy-eigenbasis populations.

    `doubly_occupied_first`: (both modes filled, ..., empty), as for the quantum dot.
    `empty_first`: (empty, mode 1 only, mode 2 only, both filled).
    """

    DOUBLY_OCCUPIED_FIRST = "doubly_occupied_first"
    EMPTY_FIRST = "empty_first"


@dataclass(frozen=True, slots=True)
class SiteBath:
    temperature: float = 1.0
    mu: float = 0.0

    def __post_init__(self) -> None:
        check_temperature(self.temperature)


@dataclass(frozen=True, slots=True)
class TwoSiteParams:
    omega1: float = 1.0
    omega2: float = 1.0
    delta: float = 0.2
    gamma1: float = 0.05
    gamma2: float = 0.05
    bath1: SiteBath = SiteBath()
    bath2: SiteBath = SiteBath()
    ordering: StateOrdering = StateOrdering.DOUBLY_OCCUPIED_FIRST

    def __post_init__(self) -> None:
        for name in ("gamma1", "gamma2"):
            if not getattr(self, name) > 0:
                msg = f"decay rate must be positive, got {getattr(self, name)}"
                raise OutOfDomainError(msg, field=name)

    @property
    def equal_sites(self) -> bool:
        return abs(self.omega1 - self.omega2) <= DEGENERACY_TOL

    @property
    def symmetric(self) -> bool:
        return self.equal_sites and abs(self.gamma1 - self.gamma2) <= DEGENERACY_TOL

    @property
    def slowest_rate(self) -> float:
        return min(self.gamma1, self.gamma2)

    def with_potentials(self, mu1: float, mu2: float) -> TwoSiteParams:
        return replace(
            self, bath1=replace(self.bath1, mu=mu1), bath2=replace(self.bath2, mu=mu2)
        )

    def biased(self, mean: float, bias: float) -> TwoSiteParams:
        """Baths at mu1 = mean + bias and mu2 = mean - bias."""
        return self.with_potentials(mean + bias, mean - bias)


@dataclass(frozen=True, slots=True)
class DerivedAngles:
    """Mixing angle and eigenenergies, omega_prime1 >= omega_prime2."""

    theta: float
    omega_prime1: float
    omega_prime2: float


@dataclass(frozen=True, slots=True)
class OccupationTable:
    """n[k, i]: Fermi factor of eigenmode k against bath i."""

    n: RealMatrix

    def __post_init__(self) -> None:
        self.n.setflags(write=False)

    def mode_sums(self) -> RealMatrix:
        """n_kp = n[k, 0] + n[k, 1] for each mode k."""
        return self.n.sum(axis=1)


@dataclass(frozen=True, slots=True)
class TwoSiteState:
    """Populations (in the configured ordering) and the rho23 coherence."""

    populations: tuple[float, float, float, float]
    coherence: complex = 0j

    def __post_init__(self) -> None:
        p = tuple(float(x) for x in self.populations)
        if len(p) != 4:  # noqa: PLR2004
            msg = f"two-site state needs 4 populations, got {len(p)}"
            raise OutOfDomainError(msg, field="populations")
        object.__setattr__(self, "populations", p)
        object.__setattr__(self, "coherence", complex(self.coherence))
        if abs(sum(p) - 1.0) > SUM_TOL:
            msg = f"populations must sum to 1, got {sum(p):.12g}"
            raise OutOfDomainError(msg, field="populations")
        if any(x < -BOUND_TOL or x > 1 + BOUND_TOL for x in p):
            msg = f"populations must lie in [0, 1], got {list(p)}"
            raise OutOfDomainError(msg, field="populations")
        limit = math.sqrt(max(p[1], 0.0) * max(p[2], 0.0)) + BOUND_TOL
        if abs(self.coherence) > limit:
            msg = f"|rho23| = {abs(self.coherence):.6g} exceeds sqrt(rho22 rho33)"
            raise OutOfDomainError(msg, field="coherence")

    def density_matrix(self) -> ComplexMatrix:
        return density_matrix(np.array(self.populations), self.coherence)


def density_matrix(populations: np.ndarray, coherence: complex) -> ComplexMatrix:
    rho = np.diag(np.asarray(populations, dtype=np.complex128))
    rho[1, 2] = coherence
    rho[2, 1] = np.conj(coherence)
    return rho


def derive_angles(params: TwoSiteParams) -> DerivedAngles:
    """Raises DegenerateSpectrumError when omega1 = omega2 and delta = 0."""
    split = math.hypot(params.omega1 - params.omega2, 2 * params.delta)
    if split <= DEGENERACY_TOL:
        msg = "equal site energies with zero tunneling leave the mixing angle undefined"
        raise DegenerateSpectrumError(msg, field="delta")
    cos_theta = min(1.0, max(-1.0, (params.omega2 - params.omega1) / split))
    mean = params.omega1 + params.omega2
    return DerivedAngles(math.acos(cos_theta), 0.5 * (mean + split), 0.5 * (mean - split))


def occupation_table(params: TwoSiteParams, angles: DerivedAngles | None = None) -> OccupationTable:
    a = angles or derive_angles(params)
    baths = (params.bath1, params.bath2)
    n = np.array(
        [
            [fermi(energy, bath.mu, bath.temperature) for bath in baths]
            for energy in (a.omega_prime1, a.omega_prime2)
        ]
    )
    return OccupationTable(n)
