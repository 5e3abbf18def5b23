"""Change between the energy eigenbasis and the local (site) basis for equal sites."""

from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np

from mpemba_relax.errors import OutOfDomainError

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.twosite.model import TwoSiteParams
    from mpemba_relax.types import ComplexMatrix

# Acts on the single-excitation block; it is its own inverse
_ROTATION = np.eye(4, dtype=np.complex128)
_ROTATION[1:3, 1:3] = np.array([[1.0, -1.0], [-1.0, -1.0]]) / math.sqrt(2.0)
_ROTATION.setflags(write=False)


def _check_equal_sites(params: TwoSiteParams | None) -> None:
    if params is not None and not params.equal_sites:
        msg = "the local-basis transformation needs omega1 = omega2"
        raise OutOfDomainError(msg, field="omega2")


def _rotate(rho: npt.ArrayLike) -> ComplexMatrix:
    m = np.asarray(rho, dtype=np.complex128)
    if m.shape[-2:] != (4, 4):
        msg = f"expected 4x4 density matrices, got shape {m.shape}"
        raise OutOfDomainError(msg)
    return _ROTATION @ m @ _ROTATION


def global_to_local(rho: npt.ArrayLike, params: TwoSiteParams | None = None) -> ComplexMatrix:
    """Map eigenbasis density matrices (single or stacked) to the site basis.

    With a = rho22, b = rho33 and c = rho23:
    local22 = (a+b)/2 - Re c, local33 = (a+b)/2 + Re c, local23 = -(a-b)/2 - i Im c.
    """
    _check_equal_sites(params)
    return _rotate(rho)


def local_to_global(rho: npt.ArrayLike, params: TwoSiteParams | None = None) -> ComplexMatrix:
    _check_equal_sites(params)
    return _rotate(rho)
