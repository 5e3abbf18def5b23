"""Lindblad and Redfield generators of the two-site model.

Elements are assembled with the empty state first: (empty, mode 1 only, mode 2 only,
both filled), followed by the coherences (rho23, rho32) in Redfield mode. The result is
then permuted into the configured state ordering.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.twosite.model import (
    DerivedAngles,
    OccupationTable,
    StateOrdering,
    TwoSiteParams,
    derive_angles,
    occupation_table,
)

if TYPE_CHECKING:
    from mpemba_relax.types import ComplexMatrix, RealMatrix

log = logging.getLogger(__name__)

POPULATIONS = 4
REDFIELD_DIM = 6

# User index i takes element index _REVERSED[i]; rho23 and rho32 swap with the populations
_REVERSED = (3, 2, 1, 0, 5, 4)


class GeneratorMode(StrEnum):
    LINDBLAD = "lindblad"
    REDFIELD = "redfield"


@dataclass(frozen=True, slots=True)
class TwoSiteGenerator:
    mode: GeneratorMode
    matrix: ComplexMatrix
    ordering: StateOrdering

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])


def population_block(
    params: TwoSiteParams, angles: DerivedAngles, table: OccupationTable
) -> RealMatrix:
    """4x4 rate matrix in empty-first order; columns sum to zero."""
    s2 = math.sin(angles.theta / 2) ** 2
    c2 = math.cos(angles.theta / 2) ** 2
    n = table.n
    g1, g2 = params.gamma1, params.gamma2
    a1 = g1 * (s2 * n[0, 0] + c2 * n[0, 1])
    a2 = g2 * (c2 * n[1, 0] + s2 * n[1, 1])
    return np.array(
        [
            [-2 * (a1 + a2), 2 * g1 - 2 * a1, 2 * g2 - 2 * a2, 0.0],
            [2 * a1, 2 * a1 - 2 * g1 - 2 * a2, 0.0, 2 * g2 - 2 * a2],
            [2 * a2, 0.0, -2 * a1 + 2 * a2 - 2 * g2, 2 * g1 - 2 * a1],
            [0.0, 2 * a2, 2 * a1, 2 * a1 - 2 * g1 + 2 * a2 - 2 * g2],
        ]
    )


def coherence_coupling(
    params: TwoSiteParams, angles: DerivedAngles, table: OccupationTable
) -> float:
    """Population-coherence coupling; vanishes when both baths give equal occupations."""
    sc = math.sin(angles.theta / 2) * math.cos(angles.theta / 2)
    n = table.n
    return -sc * (
        params.gamma1 * (n[0, 0] - n[0, 1]) + params.gamma2 * (n[1, 0] - n[1, 1])
    )


def build_generator(
    params: TwoSiteParams, mode: GeneratorMode = GeneratorMode.LINDBLAD
) -> TwoSiteGenerator:
    """Assemble the 4x4 (Lindblad) or 6x6 (Redfield) generator in the params' ordering."""
    angles = derive_angles(params)
    table = occupation_table(params, angles)
    pop = population_block(params, angles, table)

    if mode is GeneratorMode.LINDBLAD:
        m = pop.astype(np.complex128)
    else:
        c = coherence_coupling(params, angles, table)
        z = complex(-params.gamma1 - params.gamma2, angles.omega_prime2 - angles.omega_prime1)
        m = np.zeros((REDFIELD_DIM, REDFIELD_DIM), dtype=np.complex128)
        m[:POPULATIONS, :POPULATIONS] = pop
        coupling = np.array([c, -c, -c, c])
        m[:POPULATIONS, 4] = coupling
        m[:POPULATIONS, 5] = coupling
        m[4, :POPULATIONS] = -c
        m[5, :POPULATIONS] = -c
        m[4, 4] = z
        m[5, 5] = z.conjugate()
        log.debug("redfield coupling=%.6g coherence rate=%s", c, z)

    if params.ordering is StateOrdering.DOUBLY_OCCUPIED_FIRST:
        perm = list(_REVERSED[: m.shape[0]])
        m = m[np.ix_(perm, perm)]
    return TwoSiteGenerator(mode, np.ascontiguousarray(m), params.ordering)
