"""Fermi-Dirac occupation factors."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy.special import expit

from mpemba_relax.errors import NonPositiveTemperatureError

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import RealVector


def check_temperature(temperature: float, field: str = "temperature") -> None:
    if not temperature > 0:
        msg = f"temperature must be positive, got {temperature}"
        raise NonPositiveTemperatureError(msg, field=field)


def fermi(energy: float, mu: float, temperature: float) -> float:
    """Return 1 / (1 + exp((energy - mu) / temperature))."""
    check_temperature(temperature)
    return float(expit((mu - energy) / temperature))


def fermi_grid(energy: float, mu: npt.ArrayLike, temperature: float) -> RealVector:
    """Vectorized `fermi` over an array of chemical potentials."""
    check_temperature(temperature)
    return expit((np.asarray(mu, dtype=np.float64) - energy) / temperature)
