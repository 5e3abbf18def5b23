"""Two-site fermionic model with Lindblad and Redfield generators."""

from mpemba_relax.twosite.basis import global_to_local, local_to_global
from mpemba_relax.twosite.dynamics import (
    TwoSiteTrajectory,
    delta_decomposition,
    delta_matrix,
    evolve_density,
    evolve_two_site,
    is_strong_mpemba,
    positivity_violation,
    strong_mpemba_coefficients,
)
from mpemba_relax.twosite.generator import GeneratorMode, TwoSiteGenerator, build_generator
from mpemba_relax.twosite.model import (
    DerivedAngles,
    OccupationTable,
    SiteBath,
    StateOrdering,
    TwoSiteParams,
    TwoSiteState,
    derive_angles,
    occupation_table,
)

__all__ = [
    "DerivedAngles",
    "GeneratorMode",
    "OccupationTable",
    "SiteBath",
    "StateOrdering",
    "TwoSiteGenerator",
    "TwoSiteParams",
    "TwoSiteState",
    "TwoSiteTrajectory",
    "build_generator",
    "delta_decomposition",
    "delta_matrix",
    "derive_angles",
    "evolve_density",
    "evolve_two_site",
    "global_to_local",
    "is_strong_mpemba",
    "local_to_global",
    "occupation_table",
    "positivity_violation",
    "strong_mpemba_coefficients",
]
