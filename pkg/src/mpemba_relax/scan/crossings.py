"""Sign-change detection between two sampled trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import brentq

from mpemba_relax.errors import GridMismatchError

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import Evaluator

REFINE_TOL = 1e-9
# Differences below this fraction of the series scale are treated as zero
NOISE_FLOOR = 1e-10


@dataclass(frozen=True, slots=True)
class Crossing:
    """A time where A - B changes sign; direction is +1 when A overtakes B from below."""

    time: float
    direction: int


def detect_crossings(
    times: npt.ArrayLike,
    series_a: npt.ArrayLike,
    series_b: npt.ArrayLike,
    evaluator: Evaluator | None = None,
    tol: float = REFINE_TOL,
) -> list[Crossing]:
    """Return every sign change of A - B on the sample grid.

    Brackets are refined with Brent's method on `evaluator` (A(t) - B(t) in continuous
    time) or, without one, by linear interpolation of the bracketing samples. Touches
    without a sign change and samples within the noise floor are not crossings.

    Raises:
        GridMismatchError: If the series do not share one strictly increasing grid of
            at least two samples.

    """
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    a = np.asarray(series_a, dtype=np.float64).reshape(-1)
    b = np.asarray(series_b, dtype=np.float64).reshape(-1)
    if not t.shape == a.shape == b.shape:
        msg = f"series lengths differ: times={t.size}, A={a.size}, B={b.size}"
        raise GridMismatchError(msg)
    if t.size < 2:  # noqa: PLR2004
        msg = "need at least two samples"
        raise GridMismatchError(msg)
    if np.any(np.diff(t) <= 0):
        msg = "time grid must be strictly increasing"
        raise GridMismatchError(msg)

    diff = a - b
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    significant = np.abs(diff) > NOISE_FLOOR * scale

    crossings: list[Crossing] = []
    prev: int | None = None
    for i in np.flatnonzero(significant):
        if prev is not None and np.sign(diff[i]) != np.sign(diff[prev]):
            time = _refine(t[prev], t[i], diff[prev], diff[i], evaluator, tol)
            crossings.append(Crossing(time, int(np.sign(diff[i]))))
        prev = int(i)
    return crossings


def first_crossing(
    times: npt.ArrayLike,
    series_a: npt.ArrayLike,
    series_b: npt.ArrayLike,
    evaluator: Evaluator | None = None,
) -> float | None:
    found = detect_crossings(times, series_a, series_b, evaluator)
    return found[0].time if found else None


def _refine(
    lo: float, hi: float, d_lo: float, d_hi: float, evaluator: Evaluator | None, tol: float
) -> float:
    if evaluator is None:
        return float(lo - d_lo * (hi - lo) / (d_hi - d_lo))
    f_lo, f_hi = evaluator(lo), evaluator(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        # Evaluator disagrees with the sampled series; fall back to interpolation
        return float(lo - d_lo * (hi - lo) / (d_hi - d_lo))
    return float(brentq(evaluator, lo, hi, xtol=tol * 1e-3, rtol=4 * np.finfo(float).eps))
