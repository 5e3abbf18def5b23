"""Experiment orchestration behind the evolve and scan commands."""

from __future__ import annotations

import logging
from collections.abc import Callable
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.config import ExperimentConfig, ModelKind, ScanKind
from mpemba_relax.errors import (
    ConfigError,
    DegenerateDifferenceError,
    DivisionBlockedError,
    NotADensityMatrixError,
)
from mpemba_relax.linalg import eigendecompose
from mpemba_relax.models import Cell, ScanResult
from mpemba_relax.observables import (
    concurrence_series,
    entropy_series,
    mutual_information_series,
)
from mpemba_relax.qdot.analytic import SignConvention, evolve_dot
from mpemba_relax.qdot.criterion import dot_crossing_time, mpemba_criterion
from mpemba_relax.qdot.model import STATE_LABELS
from mpemba_relax.scan.boundary import find_intersection, threshold_bias, trace_boundary
from mpemba_relax.scan.correlations import (
    Observable,
    ObservableSpec,
    PairEvolution,
    coherence_region_map,
    crossing_time_curve,
    sudden_death_time,
)
from mpemba_relax.scan.crossings import detect_crossings
from mpemba_relax.twosite.dynamics import TwoSiteTrajectory, evolve_two_site
from mpemba_relax.twosite.generator import build_generator

if TYPE_CHECKING:
    from mpemba_relax.config import ScanSection
    from mpemba_relax.qdot.model import DotParams, DotState, DotTrajectory
    from mpemba_relax.twosite.model import TwoSiteParams, TwoSiteState
    from mpemba_relax.types import RealVector

log = logging.getLogger(__name__)

Progress = Callable[[int, int], None]

TWO_SITE_COLUMNS = (
    "rho11",
    "rho22",
    "rho33",
    "rho44",
    "re_rho23",
    "im_rho23",
    "concurrence",
    "qmi",
    "entropy",
)


def _cells(values: RealVector | list[float | None]) -> list[Cell]:
    return [None if v is None else float(v) for v in values]


# =============================================================================
# evolve
# =============================================================================


def run_evolve(config: ExperimentConfig) -> ScanResult:
    """Trajectories of every configured initial state on the configured time grid."""
    if config.model is ModelKind.QDOT:
        return _evolve_dot(config)
    return _evolve_two_site(config)


def _evolve_dot(config: ExperimentConfig) -> ScanResult:
    params = config.dot_params()
    states = config.dot_states(params)
    t = config.time_grid()
    trajectories = [(label, evolve_dot(params, state, t)) for label, state in states]

    columns = ["t"] + [f"{label}_{name}" for label, _ in states for name in STATE_LABELS]
    blocks = np.column_stack([t] + [traj.populations for _, traj in trajectories])
    summary: dict[str, Cell] = {}
    if len(states) >= 2:  # noqa: PLR2004
        summary.update(_dot_pair_summary(config, params, states, trajectories, t))
    return ScanResult(
        command="evolve",
        kind="qdot",
        columns=columns,
        rows=[_cells(row) for row in blocks],
        summary=summary,
    )


def _dot_pair_summary(
    config: ExperimentConfig,
    params: DotParams,
    states: list[tuple[str, DotState]],
    trajectories: list[tuple[str, DotTrajectory]],
    t: RealVector,
) -> dict[str, Cell]:
    element = config.criterion.element
    convention = config.criterion.convention
    (_, rho_i), (_, rho_ii) = states[0], states[1]
    row = element - 1
    sampled = detect_crossings(
        t, trajectories[0][1].populations[:, row], trajectories[1][1].populations[:, row]
    )
    summary: dict[str, Cell] = {
        "element": element,
        "convention": str(convention),
        "sampled_crossings": len(sampled),
    }
    try:
        result = mpemba_criterion(params, rho_i, rho_ii, element, convention)
    except (DegenerateDifferenceError, DivisionBlockedError) as e:
        log.warning("criterion undefined for the first two states: %s", e)
        summary.update(criterion=None, in_regime=None, crossing_time=None)
        return summary
    # Legacy S_n does not predict trajectory crossings
    prefix = "legacy_" if convention is SignConvention.LEGACY else ""
    summary[f"{prefix}criterion"] = result.value
    summary[f"{prefix}in_regime"] = result.in_regime
    summary["crossing_time"] = dot_crossing_time(params, rho_i, rho_ii, element, convention)
    return summary


def _safe_series(fn: Callable[[], RealVector], name: str, size: int) -> list[float | None]:
    try:
        return list(fn())
    except NotADensityMatrixError as e:
        log.warning("%s left empty: %s", name, e)
        return [None] * size


def _two_site_columns(
    params: TwoSiteParams, traj: TwoSiteTrajectory
) -> list[list[float | None]]:
    n = traj.times.size
    rho = traj.density_matrices()
    if params.equal_sites:
        concurrence = list(concurrence_series(traj.populations, traj.coherences))
        qmi = _safe_series(lambda: mutual_information_series(rho), "qmi", n)
    else:
        concurrence = [None] * n
        qmi = [None] * n
    entropy = _safe_series(lambda: entropy_series(rho), "entropy", n)
    return [
        *[list(traj.populations[:, k]) for k in range(4)],
        list(traj.coherences.real),
        list(traj.coherences.imag),
        concurrence,
        qmi,
        entropy,
    ]


def _evolve_two_site(config: ExperimentConfig) -> ScanResult:
    params = config.two_site_params()
    states = config.two_site_states()
    t = config.time_grid()
    gen = build_generator(params, config.mode)
    decomp = eigendecompose(gen.matrix)
    trajectories = [evolve_two_site(gen, state, t, decomp) for _, state in states]

    columns = ["t"] + [f"{label}_{name}" for label, _ in states for name in TWO_SITE_COLUMNS]
    data: list[list[float | None]] = [list(t)]
    for traj in trajectories:
        data.extend(_two_site_columns(params, traj))
    summary: dict[str, Cell] = {
        f"{label}_worst_violation": traj.worst_violation
        for (label, _), traj in zip(states, trajectories, strict=True)
    }
    if params.equal_sites:
        for label, state in states:
            summary[f"{label}_sudden_death"] = sudden_death_time(
                params, state, config.mode, float(t[-1]), t.size
            )
    if len(states) >= 2:  # noqa: PLR2004
        pair = PairEvolution(
            gen, decomp, states[0][1], states[1][1], trajectories[0], trajectories[1]
        )
        summary.update(_two_site_pair_summary(params, pair))
    return ScanResult(
        command="evolve",
        kind=f"two_site_{config.mode}",
        columns=columns,
        rows=[_cells(list(row)) for row in zip(*data, strict=True)],
        summary=summary,
    )


def _two_site_pair_summary(params: TwoSiteParams, pair: PairEvolution) -> dict[str, Cell]:
    kinds = [ObservableSpec(Observable.POPULATION, k) for k in (1, 2, 3, 4)]
    if params.equal_sites:
        kinds = [ObservableSpec(Observable.CONCURRENCE), ObservableSpec(Observable.QMI), *kinds]
    summary: dict[str, Cell] = {}
    for spec in kinds:
        population = spec.kind is Observable.POPULATION
        name = f"rho{spec.element}{spec.element}" if population else spec.kind
        try:
            found = pair.crossings(spec)
        except NotADensityMatrixError as e:
            log.warning("%s crossings skipped: %s", name, e)
            continue
        summary[f"{name}_crossings"] = len(found)
        summary[f"{name}_first_crossing"] = found[0].time if found else None
    return summary


# =============================================================================
# scan
# =============================================================================


def run_scan(
    config: ExperimentConfig, threads: int = 1, progress: Progress | None = None
) -> ScanResult:
    scan = config.require_scan()
    if scan.kind in (ScanKind.BOUNDARY, ScanKind.THRESHOLD):
        _require_model(config, ModelKind.QDOT, scan.kind)
        if scan.kind is ScanKind.BOUNDARY:
            return _scan_boundary(config, scan, threads, progress)
        return _scan_threshold(config, scan)
    _require_model(config, ModelKind.TWO_SITE, scan.kind)
    if scan.kind is ScanKind.CROSSING_TIME:
        return _scan_crossing_time(config, scan, threads, progress)
    return _scan_region_map(config, scan, threads, progress)


def _require_model(config: ExperimentConfig, model: ModelKind, kind: ScanKind) -> None:
    if config.model is not model:
        msg = f"scan kind '{kind}' needs model '{model}'"
        raise ConfigError(msg, field="scan.kind")


def _require_axis(scan: ScanSection, name: str) -> list[float]:
    axis = getattr(scan, name)
    if axis is None:
        msg = f"scan kind '{scan.kind}' needs a '{name}' axis"
        raise ConfigError(msg, field=f"scan.{name}")
    return axis.grid()


def _first_two(
    states: list[tuple[str, TwoSiteState]],
) -> tuple[TwoSiteState, TwoSiteState]:
    if len(states) < 2:  # noqa: PLR2004
        msg = "this scan compares two initial states"
        raise ConfigError(msg, field="initial_states")
    return states[0][1], states[1][1]


def _scan_boundary(
    config: ExperimentConfig, scan: ScanSection, threads: int, progress: Progress | None
) -> ScanResult:
    params = config.dot_params()
    template = config.preparing_template()
    settings = config.boundary_settings()
    mu2 = _require_axis(scan, "mu2")
    curves = [
        trace_boundary(params, template, target, mu2, settings, threads, progress)
        for target in scan.targets
    ]
    rows: list[list[Cell]] = []
    summary: dict[str, Cell] = {
        "element": settings.element,
        "convention": str(settings.convention),
    }
    for i, curve in enumerate(curves):
        solved = {p.mu2: p for p in curve.points}
        for x in mu2:
            point = solved.get(x)
            rows.append(
                [curve.target, x, point.mu4 if point else None, point.value if point else None]
            )
        summary[f"curve{i}_target"] = curve.target
        summary[f"curve{i}_solved"] = len(curve.points)
        summary[f"curve{i}_diverged_beyond"] = curve.diverged_beyond
    if len(curves) >= 2:  # noqa: PLR2004
        crossing = find_intersection(curves[0], curves[1])
        summary["intersection_mu2"] = crossing[0] if crossing else None
        summary["intersection_mu4"] = crossing[1] if crossing else None
    return ScanResult(
        command="scan",
        kind="boundary",
        columns=["target", "mu2", "mu4", "criterion"],
        rows=rows,
        summary=summary,
    )


def _scan_threshold(config: ExperimentConfig, scan: ScanSection) -> ScanResult:
    params = config.dot_params()
    template = config.preparing_template()
    settings = config.boundary_settings()
    rows: list[list[Cell]] = []
    for target in scan.targets:
        threshold = threshold_bias(
            params,
            template,
            scan.mu2_fixed,
            target,
            settings,
            scan.bias_range,
            scan.bias_step,
        )
        rows.append([scan.mu2_fixed, target, threshold])
    return ScanResult(
        command="scan",
        kind="threshold",
        columns=["mu2", "target", "threshold_bias"],
        rows=rows,
        summary={"element": settings.element, "convention": str(settings.convention)},
    )


def _scan_crossing_time(
    config: ExperimentConfig, scan: ScanSection, threads: int, progress: Progress | None
) -> ScanResult:
    params = config.two_site_params()
    state_i, state_ii = _first_two(config.two_site_states())
    spec = ObservableSpec(scan.observable, scan.element)
    biases = _require_axis(scan, "biases")
    rows: list[list[Cell]] = []
    for mean in _require_axis(scan, "means"):
        curve = crossing_time_curve(
            params,
            state_i,
            state_ii,
            mean,
            biases,
            spec,
            config.mode,
            scan.horizon,
            scan.samples,
            threads,
            progress,
        )
        rows.extend([mean, bias, time] for bias, time in curve)
    return ScanResult(
        command="scan",
        kind=f"crossing_time_{scan.observable}",
        columns=["mean", "bias", "crossing_time"],
        rows=rows,
    )


def _scan_region_map(
    config: ExperimentConfig, scan: ScanSection, threads: int, progress: Progress | None
) -> ScanResult:
    params = config.two_site_params()
    state_i, state_ii = _first_two(config.two_site_states())
    region = coherence_region_map(
        params,
        state_i,
        state_ii,
        _require_axis(scan, "biases"),
        _require_axis(scan, "means"),
        scan.element,
        scan.horizon,
        scan.samples,
        threads,
        progress,
    )
    summary: dict[str, Cell] = {f"onset_mean_{m:g}": region.onset(m) for m in region.means}
    return ScanResult(
        command="scan",
        kind="region_map",
        columns=["bias", "mean", "redfield", "lindblad"],
        rows=[list(row) for row in region.rows()],
        summary=summary,
    )
