"""Crossings of two-site observables: entanglement, mutual information and populations."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import brentq

from mpemba_relax.errors import OutOfDomainError
from mpemba_relax.linalg import SpectralDecomposition, eigendecompose
from mpemba_relax.observables import (
    concurrence_series,
    mutual_information_series,
    quantum_mutual_information,
)
from mpemba_relax.scan.crossings import Crossing, detect_crossings
from mpemba_relax.scan.pool import map_nodes
from mpemba_relax.twosite.basis import global_to_local
from mpemba_relax.twosite.dynamics import TwoSiteTrajectory, evolve_density, evolve_two_site
from mpemba_relax.twosite.generator import GeneratorMode, TwoSiteGenerator, build_generator

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from mpemba_relax.twosite.model import TwoSiteParams, TwoSiteState
    from mpemba_relax.types import ComplexMatrix, RealVector

log = logging.getLogger(__name__)

HORIZON_DECAYS = 50.0
DEFAULT_SAMPLES = 2000


class Observable(StrEnum):
    CONCURRENCE = "concurrence"
    QMI = "qmi"
    POPULATION = "population"


@dataclass(frozen=True, slots=True)
class ObservableSpec:
    kind: Observable = Observable.CONCURRENCE
    element: int = 3

    def __post_init__(self) -> None:
        if self.kind is Observable.POPULATION and self.element not in (1, 2, 3, 4):
            msg = f"population index must be 1..4, got {self.element}"
            raise OutOfDomainError(msg, field="element")

    def series(self, trajectory: TwoSiteTrajectory) -> RealVector:
        if self.kind is Observable.CONCURRENCE:
            return concurrence_series(trajectory.populations, trajectory.coherences)
        if self.kind is Observable.QMI:
            return mutual_information_series(trajectory.density_matrices())
        return trajectory.populations[:, self.element - 1]

    def value(self, rho: ComplexMatrix) -> float:
        if self.kind is Observable.CONCURRENCE:
            return float(concurrence_series(np.diag(rho).real, np.array([rho[1, 2]]))[0])
        if self.kind is Observable.QMI:
            return quantum_mutual_information(global_to_local(rho))
        return float(rho[self.element - 1, self.element - 1].real)


@dataclass(frozen=True, slots=True)
class PairEvolution:
    """Two initial states evolved under one generator on a shared grid."""

    generator: TwoSiteGenerator
    decomposition: SpectralDecomposition
    state_i: TwoSiteState
    state_ii: TwoSiteState
    trajectory_i: TwoSiteTrajectory
    trajectory_ii: TwoSiteTrajectory

    @property
    def worst_violation(self) -> float:
        return max(self.trajectory_i.worst_violation, self.trajectory_ii.worst_violation)

    def evaluator(self, observable: ObservableSpec) -> Callable[[float], float]:
        def difference(t: float) -> float:
            rho_i = evolve_density(self.generator, self.decomposition, self.state_i, t)
            rho_ii = evolve_density(self.generator, self.decomposition, self.state_ii, t)
            return observable.value(rho_i) - observable.value(rho_ii)

        return difference

    def crossings(self, observable: ObservableSpec) -> list[Crossing]:
        return detect_crossings(
            self.trajectory_i.times,
            observable.series(self.trajectory_i),
            observable.series(self.trajectory_ii),
            self.evaluator(observable),
        )


def default_grid(params: TwoSiteParams, horizon: float | None, samples: int) -> RealVector:
    """`samples` uniform times on [0, horizon], horizon defaulting to 50 / min(Gamma)."""
    end = horizon if horizon is not None else HORIZON_DECAYS / params.slowest_rate
    return np.linspace(0.0, end, samples)


def evolve_pair(
    params: TwoSiteParams,
    mode: GeneratorMode,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> PairEvolution:
    gen = build_generator(params, mode)
    decomp = eigendecompose(gen.matrix)
    grid = default_grid(params, horizon, samples)
    return PairEvolution(
        gen,
        decomp,
        state_i,
        state_ii,
        evolve_two_site(gen, state_i, grid, decomp),
        evolve_two_site(gen, state_ii, grid, decomp),
    )


def _require_equal_sites(params: TwoSiteParams, observable: ObservableSpec) -> None:
    if observable.kind is not Observable.POPULATION and not params.equal_sites:
        msg = f"{observable.kind} is defined here for equal site energies only"
        raise OutOfDomainError(msg, field="omega2")


def trajectory_crossings(
    params: TwoSiteParams,
    mode: GeneratorMode,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    observable: ObservableSpec,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> list[Crossing]:
    """Every crossing of the observable between the two trajectories in (0, horizon]."""
    _require_equal_sites(params, observable)
    pair = evolve_pair(params, mode, state_i, state_ii, horizon, samples)
    return pair.crossings(observable)


def entanglement_crossing_time(
    params: TwoSiteParams,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    bias: float,
    mean: float,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> float | None:
    """First concurrence crossing under Lindblad dynamics with mu1,2 = mean +/- bias."""
    return first_crossing_time(
        params.biased(mean, bias),
        GeneratorMode.LINDBLAD,
        state_i,
        state_ii,
        ObservableSpec(Observable.CONCURRENCE),
        horizon,
        samples,
    )


def mutual_information_crossings(
    params: TwoSiteParams,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    mode: GeneratorMode = GeneratorMode.LINDBLAD,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> list[Crossing]:
    return trajectory_crossings(
        params, mode, state_i, state_ii, ObservableSpec(Observable.QMI), horizon, samples
    )


def sudden_death_time(
    params: TwoSiteParams,
    state: TwoSiteState,
    mode: GeneratorMode = GeneratorMode.LINDBLAD,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> float | None:
    """First time the concurrence of `state` reaches exactly zero, or None."""
    gen = build_generator(params, mode)
    decomp = eigendecompose(gen.matrix)
    grid = default_grid(params, horizon, samples)
    traj = evolve_two_site(gen, state, grid, decomp)
    values = concurrence_series(traj.populations, traj.coherences)
    zeros = np.flatnonzero(values == 0.0)
    if zeros.size == 0:
        return None
    k = int(zeros[0])
    if k == 0:
        return 0.0

    def margin(t: float) -> float:
        rho = global_to_local(evolve_density(gen, decomp, state, t))
        return abs(rho[1, 2]) - math.sqrt(max(rho[0, 0].real * rho[3, 3].real, 0.0))

    return float(brentq(margin, grid[k - 1], grid[k], xtol=1e-12))


def first_crossing_time(
    params: TwoSiteParams,
    mode: GeneratorMode,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    observable: ObservableSpec,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
) -> float | None:
    found = trajectory_crossings(params, mode, state_i, state_ii, observable, horizon, samples)
    return found[0].time if found else None


def crossing_time_curve(
    params: TwoSiteParams,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    mean: float,
    biases: Sequence[float],
    observable: ObservableSpec | None = None,
    mode: GeneratorMode = GeneratorMode.LINDBLAD,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> list[tuple[float, float | None]]:
    """First crossing time (concurrence by default) for each bias at a fixed mean potential."""
    spec = observable or ObservableSpec(Observable.CONCURRENCE)

    def node(bias: float) -> float | None:
        return first_crossing_time(
            params.biased(mean, bias), mode, state_i, state_ii, spec, horizon, samples
        )

    times = map_nodes(node, list(biases), threads, progress)
    return list(zip(biases, times, strict=True))


@dataclass(frozen=True, slots=True)
class RegionMap:
    """Crossing flags indexed [mean][bias] under both generators."""

    biases: tuple[float, ...]
    means: tuple[float, ...]
    redfield: tuple[tuple[bool, ...], ...]
    lindblad: tuple[tuple[bool, ...], ...]

    def rows(self) -> list[tuple[float, float, bool, bool]]:
        return [
            (bias, mean, self.redfield[i][j], self.lindblad[i][j])
            for i, mean in enumerate(self.means)
            for j, bias in enumerate(self.biases)
        ]

    def onset(self, mean: float) -> float | None:
        """Smallest bias with a Redfield crossing at the given mean."""
        flags = self.redfield[self.means.index(mean)]
        return next((b for b, flag in zip(self.biases, flags, strict=True) if flag), None)


def coherence_region_map(
    params: TwoSiteParams,
    state_i: TwoSiteState,
    state_ii: TwoSiteState,
    biases: Sequence[float],
    means: Sequence[float],
    element: int = 3,
    horizon: float | None = None,
    samples: int = DEFAULT_SAMPLES,
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> RegionMap:
    """Flag population crossings at every (bias, mean) node under Redfield and Lindblad."""
    observable = ObservableSpec(Observable.POPULATION, element)
    nodes = [(mean, bias) for mean in means for bias in biases]

    def node(point: tuple[float, float]) -> tuple[bool, bool]:
        p = params.biased(*point)
        flags = tuple(
            bool(trajectory_crossings(p, mode, state_i, state_ii, observable, horizon, samples))
            for mode in (GeneratorMode.REDFIELD, GeneratorMode.LINDBLAD)
        )
        log.debug("node mean=%g bias=%g flags=%s", point[0], point[1], flags)
        return flags[0], flags[1]

    flags = map_nodes(node, nodes, threads, progress)
    width = len(biases)
    redfield = tuple(
        tuple(f[0] for f in flags[i * width : (i + 1) * width]) for i in range(len(means))
    )
    lindblad = tuple(
        tuple(f[1] for f in flags[i * width : (i + 1) * width]) for i in range(len(means))
    )
    return RegionMap(tuple(biases), tuple(means), redfield, lindblad)
