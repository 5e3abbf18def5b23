"""Shared test fixtures."""

from __future__ import annotations

from pathlib import Path

import pytest

from mpemba_relax.qdot import BathPair, DotParams
from mpemba_relax.twosite import SiteBath, StateOrdering, TwoSiteParams, TwoSiteState

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture
def dot_equilibrium() -> DotParams:
    """eps0 = 2, U = 1.25, both relaxation baths at mu = 3, T = 1."""
    return DotParams(2.0, 1.25, BathPair.equilibrium(3.0))


@pytest.fixture
def dot_biased() -> DotParams:
    """Same dot with relaxation baths at (mu_L, mu_R) = (7, -1)."""
    return DotParams(2.0, 1.25, BathPair.biased(3.0, 4.0))


@pytest.fixture
def entangled_params() -> TwoSiteParams:
    """Equal sites, delta = 0.2, Gamma = 0.05, both baths at mu = 3."""
    return TwoSiteParams(bath1=SiteBath(1.0, 3.0), bath2=SiteBath(1.0, 3.0))


@pytest.fixture
def entangled_states() -> tuple[TwoSiteState, TwoSiteState]:
    return TwoSiteState((0.0, 0.2, 0.7, 0.1)), TwoSiteState((0.1, 0.7, 0.1, 0.1))


@pytest.fixture
def coherent_params() -> TwoSiteParams:
    """Baths at mu = 0.1 and 3 with delta = 0.05, empty state first."""
    return TwoSiteParams(
        delta=0.05,
        bath1=SiteBath(1.0, 0.1),
        bath2=SiteBath(1.0, 3.0),
        ordering=StateOrdering.EMPTY_FIRST,
    )


@pytest.fixture
def coherent_states() -> tuple[TwoSiteState, TwoSiteState]:
    return (
        TwoSiteState((0.1, 0.25, 0.65, 0.0), 0.2),
        TwoSiteState((0.1, 0.2, 0.6, 0.1), -0.1),
    )
