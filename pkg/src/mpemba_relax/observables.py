"""Entanglement and correlation measures of two-site density matrices (in bits).

Local-basis matrices are ordered (both sites occupied, site A only, site B only, empty),
so site A is the first tensor factor with "occupied" as its first basis state.
"""

from __future__ import annotations

import math
from enum import StrEnum
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg
from scipy.special import entr

from mpemba_relax.errors import NotADensityMatrixError, OutOfDomainError
from mpemba_relax.twosite.basis import global_to_local

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.twosite.model import TwoSiteState
    from mpemba_relax.types import ComplexMatrix, ComplexVector, RealMatrix, RealVector

HERMITIAN_TOL = 1e-8
TRACE_TOL = 1e-6
CLAMP_TOL = 1e-8
COHERENCE_TOL = 1e-12


class Site(StrEnum):
    A = "A"
    B = "B"


def check_density_matrix(rho: npt.ArrayLike, dim: int | None = None) -> ComplexMatrix:
    """Return `rho` as a complex array after checking it is Hermitian with unit trace."""
    m = np.asarray(rho, dtype=np.complex128)
    square = m.ndim == 2 and m.shape[0] == m.shape[1]  # noqa: PLR2004
    if not square or (dim is not None and m.shape[0] != dim):
        msg = f"expected a square {dim or 'n'}x{dim or 'n'} matrix, got shape {m.shape}"
        raise NotADensityMatrixError(msg)
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        msg = "matrix is not Hermitian"
        raise NotADensityMatrixError(msg)
    if abs(np.trace(m) - 1.0) > TRACE_TOL:
        msg = f"trace is {np.trace(m).real:.9g}, expected 1"
        raise NotADensityMatrixError(msg)
    return m


def concurrence_local(rho_local: npt.ArrayLike) -> float:
    """2 max(0, |rho23| - sqrt(rho11 rho44)) of a local-basis density matrix."""
    m = check_density_matrix(rho_local, 4)
    product = max(m[0, 0].real * m[3, 3].real, 0.0)
    return 2.0 * max(0.0, abs(m[1, 2]) - math.sqrt(product))


def concurrence_eigenbasis(state: TwoSiteState) -> float:
    """Concurrence from eigenbasis populations of a coherence-free state with equal sites."""
    if abs(state.coherence) > COHERENCE_TOL:
        msg = "eigenbasis concurrence needs rho23 = 0; use concurrence_local"
        raise OutOfDomainError(msg, field="coherence")
    p11, p22, p33, p44 = state.populations
    return 2.0 * max(0.0, 0.5 * abs(p22 - p33) - math.sqrt(max(p11 * p44, 0.0)))


def concurrence_series(populations: RealMatrix, coherences: ComplexVector) -> RealVector:
    """Concurrence for each row of eigenbasis populations and rho23 samples."""
    p = np.atleast_2d(populations)
    c = np.atleast_1d(coherences)
    local23 = -0.5 * (p[:, 1] - p[:, 2]) - 1j * c.imag
    root = np.sqrt(np.clip(p[:, 0] * p[:, 3], 0.0, None))
    return 2.0 * np.clip(np.abs(local23) - root, 0.0, None)


def von_neumann_entropy(rho: npt.ArrayLike) -> float:
    """-tr(rho log2 rho), with eigenvalues down to -1e-8 clamped to zero."""
    m = check_density_matrix(rho)
    eigenvalues = scipy.linalg.eigvalsh(m)
    if eigenvalues.min() < -CLAMP_TOL:
        msg = f"negative eigenvalue {eigenvalues.min():.3g}"
        raise NotADensityMatrixError(msg)
    return float(np.sum(entr(np.clip(eigenvalues, 0.0, None))) / math.log(2.0))


def reduced_state(rho_local: npt.ArrayLike, site: Site | str) -> ComplexMatrix:
    """Partial trace over the other site."""
    m = check_density_matrix(rho_local, 4).reshape(2, 2, 2, 2)
    if Site(site) is Site.A:
        return np.einsum("ijkj->ik", m)
    return np.einsum("ijil->jl", m)


def quantum_mutual_information(rho_local: npt.ArrayLike) -> float:
    """S(A) + S(B) - S(AB) in bits."""
    m = check_density_matrix(rho_local, 4)
    total = (
        von_neumann_entropy(reduced_state(m, Site.A))
        + von_neumann_entropy(reduced_state(m, Site.B))
        - von_neumann_entropy(m)
    )
    return max(total, 0.0)


def entropy_series(rho_global: ComplexMatrix) -> RealVector:
    return np.array([von_neumann_entropy(rho) for rho in rho_global])


def mutual_information_series(rho_global: ComplexMatrix) -> RealVector:
    """QMI of stacked eigenbasis density matrices (equal sites)."""
    return np.array([quantum_mutual_information(rho) for rho in global_to_local(rho_global)])
