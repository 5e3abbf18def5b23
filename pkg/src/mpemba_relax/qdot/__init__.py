"""Quantum dot between two fermionic reservoirs."""

from mpemba_relax.qdot.analytic import (
    DotSpectralData,
    SignConvention,
    analytic_spectral_data,
    dot_spectral_data,
    evolve_dot,
)
from mpemba_relax.qdot.criterion import (
    CriterionResult,
    PreparingPairing,
    PreparingTemplate,
    criterion_terms,
    dot_crossing_time,
    mpemba_criterion,
)
from mpemba_relax.qdot.model import (
    BathPair,
    DotParams,
    DotState,
    DotTrajectory,
    OccupationFactors,
    build_transition_matrix,
    fermi_sum,
    occupation_factors,
    prepare_initial_state,
    steady_population_grid,
    steady_populations,
    steady_state,
)

__all__ = [
    "BathPair",
    "CriterionResult",
    "DotParams",
    "DotSpectralData",
    "DotState",
    "DotTrajectory",
    "OccupationFactors",
    "PreparingPairing",
    "PreparingTemplate",
    "SignConvention",
    "analytic_spectral_data",
    "build_transition_matrix",
    "criterion_terms",
    "dot_crossing_time",
    "dot_spectral_data",
    "evolve_dot",
    "fermi_sum",
    "mpemba_criterion",
    "occupation_factors",
    "prepare_initial_state",
    "steady_population_grid",
    "steady_populations",
    "steady_state",
]
