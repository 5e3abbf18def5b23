"""Invariant suite behind the validate command.

Every check compares two independent computations (closed form against eigensolver,
spectral propagation against RK4) and reports the measured residual next to its
tolerance. Model errors raised while building parameters propagate to the caller.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.linalg import (
    eigendecompose,
    matrix_generator,
    propagate,
    propagate_many,
    rk4_integrate,
)
from mpemba_relax.models import CheckResult, ValidationReport
from mpemba_relax.qdot.analytic import analytic_spectral_data, dot_spectral_data
from mpemba_relax.qdot.model import (
    BathPair,
    DotParams,
    OccupationFactors,
    build_transition_matrix,
    occupation_factors,
)
from mpemba_relax.twosite.basis import global_to_local, local_to_global
from mpemba_relax.twosite.dynamics import state_vector
from mpemba_relax.twosite.generator import GeneratorMode, build_generator
from mpemba_relax.twosite.model import SiteBath, StateOrdering, TwoSiteParams, TwoSiteState

if TYPE_CHECKING:
    from collections.abc import Sequence

    from mpemba_relax.config import ExperimentConfig
    from mpemba_relax.types import ComplexVector

log = logging.getLogger(__name__)

SEED = 20_240_617
IDENTITY_SAMPLES = 100
SPECTRUM_SAMPLES = 20
ORACLE_STATES = 10

IDENTITY_TOL = 1e-9
ANTISPIN_TOL = 1e-12
SPECTRUM_TOL = 1e-9
ORACLE_TOL = 1e-8
TRACE_TOL = 1e-9
ROUND_TRIP_TOL = 1e-12

DOT_ORACLE_TIME = 5.0
TWO_SITE_ORACLE_TIME = 10.0
RK4_STEP = 1e-3
TRACE_HORIZON_DECAYS = 20.0
TRACE_SAMPLES = 200

DEFAULT_DOT = DotParams(2.0, 1.25, BathPair.biased(3.0, 4.0, 1.0))
DEFAULT_TWO_SITE = TwoSiteParams(
    delta=0.05,
    bath1=SiteBath(1.0, 0.1),
    bath2=SiteBath(1.0, 3.0),
    ordering=StateOrdering.EMPTY_FIRST,
)


def _check(name: str, measured: float, tolerance: float) -> CheckResult:
    passed = bool(np.isfinite(measured)) and measured <= tolerance
    status = "ok" if passed else "FAIL"
    log.info("%s: %s (measured %.3g, tolerance %.3g)", name, status, measured, tolerance)
    return CheckResult(name=name, passed=passed, measured=float(measured), tolerance=tolerance)


def _spectrum_distance(computed: ComplexVector, expected: Sequence[complex]) -> float:
    """Largest distance after greedily pairing each expected eigenvalue with a computed one."""
    remaining = list(computed)
    worst = 0.0
    for value in expected:
        distances = [abs(c - value) for c in remaining]
        k = int(np.argmin(distances))
        worst = max(worst, distances[k])
        remaining.pop(k)
    return worst


def _random_dot_state(rng: np.random.Generator) -> ComplexVector:
    return rng.dirichlet(np.ones(4)).astype(np.complex128)


def _random_two_site_state(rng: np.random.Generator) -> TwoSiteState:
    p = rng.dirichlet(np.ones(4))
    radius = 0.9 * np.sqrt(p[1] * p[2]) * rng.uniform()
    phase = rng.uniform(0.0, 2.0 * np.pi)
    pops = (float(p[0]), float(p[1]), float(p[2]), float(p[3]))
    return TwoSiteState(pops, complex(radius * np.cos(phase), radius * np.sin(phase)))


# =============================================================================
# Quantum dot
# =============================================================================


def check_dot_identity(rng: np.random.Generator) -> list[CheckResult]:
    """Closed-form eigensystem against the transition matrix over random occupations."""
    identity = 0.0
    antispin = 0.0
    flip = np.array([-1.0, 1.0, 1.0, -1.0])
    for _ in range(IDENTITY_SAMPLES):
        a, b = rng.uniform(0.05, 1.95, size=2)
        f = OccupationFactors(max(a, b), min(a, b))
        data = analytic_spectral_data(f)
        m = build_transition_matrix(f).real
        lam = np.diag(data.eigenvalues)
        r, left = data.right_matrix, data.left_matrix
        identity = max(
            identity,
            float(np.max(np.abs(m @ r - r @ lam))),
            float(np.max(np.abs(left @ m - lam @ left))),
        )
        antispin = max(antispin, float(np.max(np.abs(left[:3] @ flip))))
    return [
        _check("dot_analytic_identity", identity, IDENTITY_TOL),
        _check("dot_antispin_rows", antispin, ANTISPIN_TOL),
    ]


def check_dot_numeric(params: DotParams, rng: np.random.Generator) -> list[CheckResult]:
    """Eigensolver spectrum and RK4 trajectories against the closed form."""
    data = dot_spectral_data(params)
    m = build_transition_matrix(occupation_factors(params), params.gamma)
    numeric = eigendecompose(m)
    spectrum = _spectrum_distance(numeric.eigenvalues, list(data.eigenvalues.astype(complex)))

    decomp = data.as_decomposition()
    apply = matrix_generator(m)
    oracle = 0.0
    trace = 0.0
    bounds = 0.0
    grid = np.linspace(0.0, TRACE_HORIZON_DECAYS / params.gamma, TRACE_SAMPLES)
    for _ in range(ORACLE_STATES):
        x0 = _random_dot_state(rng)
        spectral = propagate(decomp, x0, DOT_ORACLE_TIME)
        stepped = rk4_integrate(apply, x0, DOT_ORACLE_TIME, RK4_STEP)
        oracle = max(oracle, float(np.max(np.abs(spectral - stepped))))
        x = propagate_many(decomp, x0, grid).real
        trace = max(trace, float(np.max(np.abs(x.sum(axis=1) - 1.0))))
        bounds = max(bounds, float(np.max(-x)), float(np.max(x - 1.0)))
    return [
        _check("dot_numeric_spectrum", spectrum, SPECTRUM_TOL),
        _check("dot_residual", decomp.residual, IDENTITY_TOL),
        _check("dot_rk4_oracle", oracle, ORACLE_TOL),
        _check("dot_trace", trace, TRACE_TOL),
        _check("dot_population_bounds", max(bounds, 0.0), TRACE_TOL),
    ]


# =============================================================================
# Two-site model
# =============================================================================


def check_two_site_spectra(rng: np.random.Generator) -> list[CheckResult]:
    """Symmetric-case spectra (0, -2G, -2G, -4G), plus -2G +/- 2i delta with coherences."""
    lindblad = 0.0
    redfield = 0.0
    gamma = 0.05
    for k in range(SPECTRUM_SAMPLES):
        delta = (0.05, 0.2)[k % 2]
        t1, t2 = rng.uniform(0.5, 3.0, size=2)
        mu1, mu2 = rng.uniform(-2.0, 5.0, size=2)
        params = TwoSiteParams(
            delta=delta,
            gamma1=gamma,
            gamma2=gamma,
            bath1=SiteBath(float(t1), float(mu1)),
            bath2=SiteBath(float(t2), float(mu2)),
        )
        populations = [0.0, -2 * gamma, -2 * gamma, -4 * gamma]
        coherences = [complex(-2 * gamma, 2 * delta), complex(-2 * gamma, -2 * delta)]
        lin = eigendecompose(build_generator(params, GeneratorMode.LINDBLAD).matrix)
        red = eigendecompose(build_generator(params, GeneratorMode.REDFIELD).matrix)
        lindblad = max(lindblad, _spectrum_distance(lin.eigenvalues, populations))
        redfield = max(
            redfield, _spectrum_distance(red.eigenvalues, [*populations, *coherences])
        )
    return [
        _check("two_site_lindblad_spectrum", lindblad, SPECTRUM_TOL),
        _check("two_site_redfield_spectrum", redfield, SPECTRUM_TOL),
    ]


def check_two_site_numeric(params: TwoSiteParams, rng: np.random.Generator) -> list[CheckResult]:
    """RK4 agreement and trace conservation under both generators."""
    results = []
    states = [_random_two_site_state(rng) for _ in range(ORACLE_STATES)]
    grid = np.linspace(0.0, TRACE_HORIZON_DECAYS / params.slowest_rate, TRACE_SAMPLES)
    for mode in GeneratorMode:
        gen = build_generator(params, mode)
        decomp = eigendecompose(gen.matrix)
        apply = matrix_generator(gen.matrix)
        oracle = 0.0
        trace = 0.0
        for state in states:
            x0 = state_vector(gen, state)
            spectral = propagate(decomp, x0, TWO_SITE_ORACLE_TIME)
            stepped = rk4_integrate(apply, x0, TWO_SITE_ORACLE_TIME, RK4_STEP)
            oracle = max(oracle, float(np.max(np.abs(spectral - stepped))))
            x = propagate_many(decomp, x0, grid)
            trace = max(trace, float(np.max(np.abs(x[:, :4].sum(axis=1) - 1.0))))
        results.append(_check(f"two_site_{mode}_residual", decomp.residual, IDENTITY_TOL))
        results.append(_check(f"two_site_{mode}_rk4_oracle", oracle, ORACLE_TOL))
        results.append(_check(f"two_site_{mode}_trace", trace, TRACE_TOL))
    return results


def check_basis_round_trip(rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for state in (_random_two_site_state(rng) for _ in range(ORACLE_STATES)):
        rho = state.density_matrix()
        back = local_to_global(global_to_local(rho))
        worst = max(worst, float(np.max(np.abs(back - rho))))
    return _check("basis_round_trip", worst, ROUND_TRIP_TOL)


# =============================================================================
# Entry point
# =============================================================================


def run_validate(config: ExperimentConfig | None = None) -> ValidationReport:
    """Run the invariant suite on the configured models, or on built-in defaults."""
    dot = config.dot_params() if config is not None and config.qdot is not None else DEFAULT_DOT
    two_site = (
        config.two_site_params()
        if config is not None and config.two_site is not None
        else DEFAULT_TWO_SITE
    )
    # Surfaces DegenerateSpectrumError before any random sampling
    build_generator(two_site)

    rng = np.random.default_rng(SEED)
    checks = [
        *check_dot_identity(rng),
        *check_dot_numeric(dot, rng),
        *check_two_site_spectra(rng),
        *check_two_site_numeric(two_site, rng),
        check_basis_round_trip(rng),
    ]
    report = ValidationReport(checks=checks)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        log.warning("validation failed: %s", ", ".join(failed))
    else:
        log.info("all %d checks passed", len(checks))
    return report
