"""Contours S_n(mu2, mu4) = target in preparing-bath space and the bias where they break off."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import brentq

from mpemba_relax.errors import NoBracketError, NotFoundError
from mpemba_relax.qdot.analytic import SignConvention, dot_spectral_data
from mpemba_relax.qdot.criterion import PreparingTemplate, criterion_terms
from mpemba_relax.qdot.model import BathPair, DotParams
from mpemba_relax.scan.pool import map_nodes

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    import numpy.typing as npt

    from mpemba_relax.types import RealVector

log = logging.getLogger(__name__)

MU4_RANGE = (-50.0, 50.0)
MU4_SAMPLES = 10001
ROOT_XTOL = 1e-12
TARGET_TOL = 1e-6
TERM_TOL = 1e-12
BIAS_RANGE = (0.0, 20.0)
BIAS_STEP = 0.5
BIAS_TOL = 1e-3


@dataclass(frozen=True, slots=True)
class BoundaryPoint:
    mu2: float
    mu4: float
    value: float


@dataclass(frozen=True, slots=True)
class BoundaryCurve:
    """Solutions ordered by mu2; `unsolved` lists mu2 samples with no bracketed root."""

    target: float
    element: int
    points: tuple[BoundaryPoint, ...]
    unsolved: tuple[float, ...]
    diverged_beyond: float | None

    def mu4_at(self, mu2: float) -> float | None:
        for p in self.points:
            if p.mu2 == mu2:
                return p.mu4
        return None


@dataclass(frozen=True, slots=True)
class BoundarySettings:
    element: int = 2
    convention: SignConvention = SignConvention.EXACT
    mu4_range: tuple[float, float] = MU4_RANGE
    mu4_samples: int = MU4_SAMPLES


def criterion_residual(
    params: DotParams,
    template: PreparingTemplate,
    mu2: float,
    target: float,
    settings: BoundarySettings,
) -> Callable[[npt.ArrayLike], tuple[RealVector, RealVector]]:
    """Return mu4 -> (numerator - target * denominator, denominator), vectorized in mu4."""
    data = dot_spectral_data(params)

    def residual(mu4: npt.ArrayLike) -> tuple[RealVector, RealVector]:
        rho_i, rho_ii = template.population_grid(params, mu2, mu4)
        num, den = criterion_terms(data, rho_i - rho_ii, settings.element, settings.convention)
        return num - target * den, den

    return residual


def solve_mu4(
    params: DotParams,
    template: PreparingTemplate,
    mu2: float,
    target: float,
    settings: BoundarySettings,
) -> list[BoundaryPoint]:
    """All mu4 in the bracketing range where S_n equals `target` for this mu2.

    Grid nodes where the residual is exactly zero count as roots. A node where both
    criterion terms vanish (the two initial states coincide) is kept when the residual
    changes sign across it; every contour passes through such a point, and its value is
    reported as `target`.

    Raises:
        NoBracketError: If the residual never changes sign over the range.

    """
    residual = criterion_residual(params, template, mu2, target, settings)
    grid = np.linspace(*settings.mu4_range, settings.mu4_samples)
    values, _ = residual(grid)
    signs = np.sign(values)

    def scalar(x: float) -> float:
        return float(residual(np.array([x]))[0][0])

    roots = [float(grid[i]) for i in np.flatnonzero(signs == 0)]
    roots += [
        float(brentq(scalar, grid[i], grid[i + 1], xtol=ROOT_XTOL))
        for i in np.flatnonzero(signs[:-1] * signs[1:] < 0)
    ]
    crossing_nodes = {
        float(grid[i])
        for i in np.flatnonzero(signs[1:-1] == 0) + 1
        if signs[i - 1] * signs[i + 1] < 0
    }

    points: list[BoundaryPoint] = []
    for root in sorted(set(roots)):
        num_minus, den = (float(v[0]) for v in residual(np.array([root])))
        if abs(den) <= TERM_TOL:
            if abs(num_minus) <= TERM_TOL and root in crossing_nodes:
                points.append(BoundaryPoint(mu2, root, target))
            continue
        value = target + num_minus / den
        if abs(value - target) <= TARGET_TOL:
            points.append(BoundaryPoint(mu2, root, value))
    if not points:
        msg = f"no root of S_{settings.element} = {target:g} for mu2 = {mu2:g}"
        raise NoBracketError(msg, field="mu2")
    return points


def _solve_or_none(
    params: DotParams, template: PreparingTemplate, target: float, settings: BoundarySettings
) -> Callable[[float], list[BoundaryPoint] | None]:
    def solve(mu2: float) -> list[BoundaryPoint] | None:
        try:
            return solve_mu4(params, template, mu2, target, settings)
        except NoBracketError as e:
            log.debug("%s", e)
            return None

    return solve


def trace_boundary(
    params: DotParams,
    template: PreparingTemplate,
    target: float,
    mu2_values: Sequence[float] | npt.ArrayLike,
    settings: BoundarySettings | None = None,
    threads: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> BoundaryCurve:
    """Solve S_n(mu2, mu4) = target for mu4 at every mu2 sample.

    Where several roots exist the one nearest the previous point is kept (the lowest for
    the first solved point). `diverged_beyond` is the last solved mu2 after which every
    remaining sample fails.
    """
    cfg = settings or BoundarySettings()
    mu2_list = [float(x) for x in np.asarray(mu2_values, dtype=np.float64).reshape(-1)]
    solved = map_nodes(_solve_or_none(params, template, target, cfg), mu2_list, threads, progress)

    points: list[BoundaryPoint] = []
    unsolved: list[float] = []
    for mu2, candidates in zip(mu2_list, solved, strict=True):
        if candidates is None:
            unsolved.append(mu2)
            continue
        if points:
            previous = points[-1].mu4
            chosen = min(candidates, key=lambda p: abs(p.mu4 - previous))
        else:
            chosen = min(candidates, key=lambda p: p.mu4)
        points.append(chosen)

    diverged: float | None = None
    if points and unsolved and unsolved[-1] > points[-1].mu2:
        diverged = points[-1].mu2
    log.info(
        "traced S_%d = %g: %d of %d points solved, diverged beyond %s",
        cfg.element,
        target,
        len(points),
        len(mu2_list),
        diverged,
    )
    return BoundaryCurve(target, cfg.element, tuple(points), tuple(unsolved), diverged)


def find_intersection(first: BoundaryCurve, second: BoundaryCurve) -> tuple[float, float] | None:
    """First crossing of two curves over their shared mu2 samples, linearly interpolated."""
    other = {p.mu2: p.mu4 for p in second.points}
    shared = [(p.mu2, p.mu4, other[p.mu2]) for p in first.points if p.mu2 in other]
    for (x0, a0, b0), (x1, a1, b1) in zip(shared, shared[1:], strict=False):
        d0, d1 = a0 - b0, a1 - b1
        if d0 == 0:
            return x0, a0
        if d0 * d1 < 0:
            w = d0 / (d0 - d1)
            return x0 + w * (x1 - x0), a0 + w * (a1 - a0)
    return None


def _diverged(
    params: DotParams,
    template: PreparingTemplate,
    mu2: float,
    target: float,
    settings: BoundarySettings,
    bias: float,
) -> bool:
    baths = params.relax_baths
    mean = 0.5 * (baths.mu_left + baths.mu_right)
    biased = replace(params, relax_baths=BathPair.biased(mean, bias, baths.t_left))
    try:
        solve_mu4(biased, template, mu2, target, settings)
    except NoBracketError:
        return True
    return False


def threshold_bias(
    params: DotParams,
    template: PreparingTemplate,
    mu2: float,
    target: float = -1.0,
    settings: BoundarySettings | None = None,
    bias_range: tuple[float, float] = BIAS_RANGE,
    step: float = BIAS_STEP,
    tol: float = BIAS_TOL,
) -> float:
    """Smallest bias at which S_n = target has no solution at the given mu2.

    The relaxation baths are placed at mean +/- bias around the mean of `params`. A coarse
    sweep locates the first diverged bias, then bisection narrows it to `tol`.

    Raises:
        NotFoundError: If the boundary is already diverged at the lower end or never
            diverges within the range.

    """
    cfg = settings or BoundarySettings()
    lo, hi = bias_range
    if _diverged(params, template, mu2, target, cfg, lo):
        msg = f"no boundary point at mu2 = {mu2:g} even at bias {lo:g}"
        raise NotFoundError(msg, field="mu2")
    sweep = np.arange(lo + step, hi + 0.5 * step, step)
    upper = next((b for b in sweep if _diverged(params, template, mu2, target, cfg, b)), None)
    if upper is None:
        msg = f"boundary does not diverge for bias up to {hi:g}"
        raise NotFoundError(msg, field="bias_range")
    lower = float(upper - step)
    upper = float(upper)
    while upper - lower > tol:
        mid = 0.5 * (lower + upper)
        if _diverged(params, template, mu2, target, cfg, mid):
            upper = mid
        else:
            lower = mid
    threshold = 0.5 * (lower + upper)
    log.info("threshold bias at mu2=%g: %.6g", mu2, threshold)
    return threshold
