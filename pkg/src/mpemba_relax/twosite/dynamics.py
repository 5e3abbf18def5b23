"""Spectral evolution and slow-mode decomposition of two-site states."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from mpemba_relax.errors import OutOfDomainError
from mpemba_relax.linalg import (
    ModeCoefficients,
    SpectralDecomposition,
    eigendecompose,
    mode_coefficients,
    as_time_grid,
    propagate,
    propagate_many,
)
from mpemba_relax.twosite.generator import (
    POPULATIONS,
    GeneratorMode,
    TwoSiteGenerator,
    build_generator,
)
from mpemba_relax.twosite.model import (
    StateOrdering,
    TwoSiteParams,
    TwoSiteState,
    density_matrix,
    occupation_table,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import ComplexMatrix, ComplexVector, RealMatrix, RealVector

log = logging.getLogger(__name__)

STRONG_TOL = 1e-9
# Slow-mode rows of the delta matrix (0-based)
SLOW_ROWS = (1, 2)


@dataclass(frozen=True, slots=True)
class TwoSiteTrajectory:
    """Samples of populations and rho23; row k belongs to `times[k]`.

    `worst_violation` is the largest amount by which any sample leaves the set of
    valid states (negative population, population above one, or |rho23| above
    sqrt(rho22 rho33)); zero for physical trajectories.
    """

    times: RealVector
    populations: RealMatrix = field(repr=False)
    coherences: ComplexVector = field(repr=False)
    mode: GeneratorMode
    worst_violation: float
    coherence_dropped: bool = False

    def density_matrices(self) -> ComplexMatrix:
        """Energy-eigenbasis density matrices, shape (samples, 4, 4)."""
        rho = np.zeros((self.times.size, 4, 4), dtype=np.complex128)
        idx = np.arange(4)
        rho[:, idx, idx] = self.populations
        rho[:, 1, 2] = self.coherences
        rho[:, 2, 1] = np.conj(self.coherences)
        return rho


def state_vector(gen: TwoSiteGenerator, state: TwoSiteState) -> ComplexVector:
    """Generator-space vector of a state; the coherence is dropped in Lindblad mode."""
    pops = np.array(state.populations, dtype=np.complex128)
    if gen.mode is GeneratorMode.LINDBLAD:
        return pops
    return np.concatenate([pops, [state.coherence, np.conj(state.coherence)]])


def positivity_violation(populations: RealMatrix, coherences: ComplexVector) -> float:
    p = np.atleast_2d(populations)
    c = np.atleast_1d(coherences)
    below = float(np.max(-p, initial=0.0))
    above = float(np.max(p - 1.0, initial=0.0))
    bound = np.sqrt(np.clip(p[:, 1], 0.0, None) * np.clip(p[:, 2], 0.0, None))
    excess = float(np.max(np.abs(c) - bound, initial=0.0))
    return max(0.0, below, above, excess)


def evolve_two_site(
    gen: TwoSiteGenerator,
    state0: TwoSiteState,
    times: npt.ArrayLike,
    decomposition: SpectralDecomposition | None = None,
) -> TwoSiteTrajectory:
    """Propagate `state0` spectrally; a precomputed decomposition of `gen` may be passed."""
    t = as_time_grid(times)
    dropped = gen.mode is GeneratorMode.LINDBLAD and state0.coherence != 0
    if dropped:
        log.warning("Lindblad evolution ignores the initial coherence %s", state0.coherence)
    decomp = decomposition or eigendecompose(gen.matrix)
    samples = propagate_many(decomp, state_vector(gen, state0), t)
    populations = samples[:, :POPULATIONS].real
    if gen.mode is GeneratorMode.REDFIELD:
        coherences = np.array(samples[:, POPULATIONS])
    else:
        coherences = np.zeros(t.size, dtype=np.complex128)
    violation = positivity_violation(populations, coherences)
    if violation > 0:
        log.debug("trajectory leaves the state space by %.3g", violation)
    return TwoSiteTrajectory(t, populations, coherences, gen.mode, violation, dropped)


def evolve_density(
    gen: TwoSiteGenerator, decomp: SpectralDecomposition, state0: TwoSiteState, t: float
) -> ComplexMatrix:
    """Energy-eigenbasis density matrix at a single time."""
    x = propagate(decomp, state_vector(gen, state0), t)
    coherence = x[POPULATIONS] if gen.mode is GeneratorMode.REDFIELD else 0j
    return density_matrix(x[:POPULATIONS].real, complex(coherence))


# =============================================================================
# Strong Mpemba decomposition
# =============================================================================


def _require_symmetric_lindblad(params: TwoSiteParams, mode: GeneratorMode) -> None:
    if mode is not GeneratorMode.LINDBLAD:
        msg = "the slow-mode decomposition is defined for Lindblad dynamics only"
        raise OutOfDomainError(msg, field="mode")
    if not params.symmetric:
        msg = "the slow-mode decomposition needs omega1 = omega2 and gamma1 = gamma2"
        raise OutOfDomainError(msg, field="omega2")


def delta_matrix(
    params: TwoSiteParams, mode: GeneratorMode = GeneratorMode.LINDBLAD
) -> RealMatrix:
    """Closed-form left eigenvectors of the symmetric Lindblad generator, one per row.

    Rows 1..4 belong to -4 Gamma, -2 Gamma, -2 Gamma and 0; row 4 is proportional to
    the trace functional.
    """
    _require_symmetric_lindblad(params, mode)
    n1, n2 = occupation_table(params).mode_sums()
    rows = np.array(
        [
            0.25 * np.array([n1 * n2, (n1 - 2) * n2, n1 * (n2 - 2), (n1 - 2) * (n2 - 2)]),
            [-0.5 * n1 * n2, -0.5 * (n1 - 1) * n2, -0.5 * n1 * (n2 - 1), 0.5 * (n1 + n2 - n1 * n2)],
            0.5
            * np.array(
                [(n1 - 1) * n2, (n1 - 2) * n2, n1 * (n2 - 1) - n2 + 2, (n1 - 2) * (n2 - 1)]
            ),
            0.25 * n1 * n2 * np.ones(4),
        ]
    )
    if params.ordering is StateOrdering.DOUBLY_OCCUPIED_FIRST:
        rows = rows[:, ::-1]
    return np.ascontiguousarray(rows)


def delta_decomposition(params: TwoSiteParams) -> SpectralDecomposition:
    """Decomposition whose left vectors are the delta rows and right vectors inv(delta).

    Each row is paired with the generator eigenvalue it reproduces best.
    """
    rows = delta_matrix(params)
    m = build_generator(params, GeneratorMode.LINDBLAD).matrix.real
    candidates = eigendecompose(m).eigenvalues.real
    eigenvalues = np.empty(4)
    for i, row in enumerate(rows):
        image = row @ m
        errors = [np.linalg.norm(image - lam * row) for lam in candidates]
        eigenvalues[i] = candidates[int(np.argmin(errors))]
    right = scipy.linalg.inv(rows)
    residual = max(
        float(np.max(np.abs(m @ right - right * eigenvalues))),
        float(np.max(np.abs(rows @ right - np.eye(4)))),
    )
    log.debug("delta rows paired with eigenvalues %s (residual %.3g)", eigenvalues, residual)
    return SpectralDecomposition(
        eigenvalues.astype(np.complex128),
        right.astype(np.complex128),
        rows.astype(np.complex128),
        residual,
    )


def strong_mpemba_coefficients(
    params: TwoSiteParams,
    state0: TwoSiteState,
    mode: GeneratorMode = GeneratorMode.LINDBLAD,
) -> ModeCoefficients:
    """Coefficients alpha_i = <delta_i, rho(0)> in the delta-row order."""
    _require_symmetric_lindblad(params, mode)
    return mode_coefficients(delta_decomposition(params), state0.populations)


def is_strong_mpemba(coefficients: ModeCoefficients, tol: float = STRONG_TOL) -> bool:
    """True when both slow-mode coefficients vanish."""
    return all(abs(coefficients.alphas[i]) <= tol for i in SLOW_ROWS)
