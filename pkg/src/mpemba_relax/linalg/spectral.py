"""Dense eigendecomposition and spectral propagation of small generators."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from mpemba_relax.errors import (
    DefectiveMatrixError,
    DimensionMismatchError,
    NoNullSpaceError,
    NonConvergenceError,
    OutOfDomainError,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from mpemba_relax.types import ComplexMatrix, ComplexVector, RealVector

log = logging.getLogger(__name__)

# =============================================================================
# Constants
# =============================================================================

MAX_DIM = 16
RESIDUAL_TOL = 1e-9
NULL_TOL = 1e-9

# Eigenvalues closer than this (relative to the matrix scale) share an eigenspace
CLUSTER_TOL = 1e-7
CLUSTER_CONDITION = 1e6
MAX_CONDITION = 1e10


# =============================================================================
# Helper Functions
# =============================================================================


def as_complex_matrix(matrix: npt.ArrayLike) -> ComplexMatrix:
    """Validate a square, finite matrix of dimension 1..16 and return a complex copy."""
    arr = np.array(matrix, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:  # noqa: PLR2004
        msg = f"expected a square matrix, got shape {arr.shape}"
        raise DimensionMismatchError(msg)
    if not 1 <= arr.shape[0] <= MAX_DIM:
        msg = f"matrix dimension {arr.shape[0]} outside 1..{MAX_DIM}"
        raise DimensionMismatchError(msg)
    if not np.all(np.isfinite(arr)):
        msg = "matrix entries must be finite"
        raise OutOfDomainError(msg)
    return arr


def as_complex_vector(vector: npt.ArrayLike, dim: int) -> ComplexVector:
    """Return a complex copy of a vector after checking it has `dim` components."""
    arr = np.array(vector, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != dim:
        msg = f"vector has {arr.shape[0]} components, expected {dim}"
        raise DimensionMismatchError(msg)
    return arr


def _spectral_order(eigenvalues: ComplexVector, scale: float) -> list[int]:
    """Descending real part, then ascending imaginary part, then original index.

    Real parts within the cluster tolerance count as equal so that numerical noise
    cannot reorder a conjugate pair.
    """
    by_real = sorted(range(len(eigenvalues)), key=lambda i: (-eigenvalues[i].real, i))
    order: list[int] = []
    group: list[int] = []
    for i in by_real:
        if group and abs(eigenvalues[i].real - eigenvalues[group[0]].real) > CLUSTER_TOL * scale:
            order.extend(sorted(group, key=lambda j: (eigenvalues[j].imag, j)))
            group = []
        group.append(i)
    order.extend(sorted(group, key=lambda j: (eigenvalues[j].imag, j)))
    return order


def _eigenspace_clusters(eigenvalues: ComplexVector, scale: float) -> list[list[int]]:
    """Group consecutive (already sorted) eigenvalues that coincide within tolerance."""
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(eigenvalues)):
        if abs(eigenvalues[i] - eigenvalues[clusters[-1][0]]) <= CLUSTER_TOL * scale:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def _refine_cluster(
    matrix: ComplexMatrix, eigenvalues: ComplexVector, right: ComplexMatrix, cluster: list[int]
) -> None:
    """Replace a degenerate cluster's eigenvectors with an orthonormal basis of its null space."""
    dim = matrix.shape[0]
    size = len(cluster)
    center = complex(np.mean(eigenvalues[cluster]))
    _, singular, vh = scipy.linalg.svd(matrix - center * np.eye(dim))
    scale = max(1.0, float(np.max(np.abs(matrix))))
    if singular[dim - size] > CLUSTER_TOL * scale:
        msg = (
            f"eigenvalue {center:.6g} has algebraic multiplicity {size} "
            "but a smaller eigenspace"
        )
        raise DefectiveMatrixError(msg)
    right[:, cluster] = vh[dim - size :].conj().T
    eigenvalues[cluster] = center


def _normalize_null_columns(
    eigenvalues: ComplexVector, right: ComplexMatrix, scale: float
) -> None:
    """Scale zero-eigenvalue columns to unit component sum; L is inverted afterwards."""
    for k in np.flatnonzero(np.abs(eigenvalues) <= NULL_TOL * scale):
        total = right[:, k].sum()
        if abs(total) > NULL_TOL:
            right[:, k] /= total


# =============================================================================
# Types
# =============================================================================


@dataclass(frozen=True, slots=True)
class SpectralDecomposition:
    """Eigenvalues with paired right (columns) and left (rows) eigenvector matrices."""

    eigenvalues: ComplexVector
    right_vectors: ComplexMatrix
    left_vectors: ComplexMatrix
    residual: float

    def __post_init__(self) -> None:
        for arr in (self.eigenvalues, self.right_vectors, self.left_vectors):
            arr.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])


@dataclass(frozen=True, slots=True)
class ModeCoefficients:
    """Mode amplitudes alpha = L . x of a vector in a spectral decomposition."""

    alphas: ComplexVector

    def __post_init__(self) -> None:
        self.alphas.setflags(write=False)

    def reconstruct(self, decomp: SpectralDecomposition) -> ComplexVector:
        """Return sum_i alpha_i v_i."""
        return decomp.right_vectors @ self.alphas


# =============================================================================
# Operations
# =============================================================================


def eigendecompose(matrix: npt.ArrayLike) -> SpectralDecomposition:
    """Decompose a diagonalizable matrix into a biorthonormal eigensystem.

    Args:
        matrix: Square matrix of dimension at most 16 with finite entries.

    Returns:
        Decomposition sorted by descending real part (ties: ascending imaginary part,
        then original index) with L = R^-1 so that L.R = I.

    Raises:
        NonConvergenceError: If LAPACK fails to converge.
        DefectiveMatrixError: If the matrix is not diagonalizable within tolerance.

    """
    m = as_complex_matrix(matrix)
    dim = m.shape[0]
    scale = max(1.0, float(np.max(np.abs(m))))
    try:
        eigenvalues, right = scipy.linalg.eig(m)
    except (np.linalg.LinAlgError, ValueError) as e:
        msg = f"eigensolver failed: {e}"
        raise NonConvergenceError(msg) from e

    order = _spectral_order(eigenvalues, scale)
    eigenvalues = np.array(eigenvalues[order], dtype=np.complex128)
    right = np.array(right[:, order], dtype=np.complex128)
    for cluster in _eigenspace_clusters(eigenvalues, scale):
        if len(cluster) > 1 and np.linalg.cond(right[:, cluster]) > CLUSTER_CONDITION:
            _refine_cluster(m, eigenvalues, right, cluster)

    _normalize_null_columns(eigenvalues, right, scale)

    condition = float(np.linalg.cond(right))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        msg = f"eigenvector matrix is numerically singular (condition {condition:.3g})"
        raise DefectiveMatrixError(msg)
    left = scipy.linalg.inv(right)

    eig_residual = float(np.max(np.abs(m @ right - right * eigenvalues)))
    bi_residual = float(np.max(np.abs(left @ right - np.eye(dim))))
    residual = max(eig_residual, bi_residual)
    if residual > RESIDUAL_TOL:
        msg = f"eigensystem residual {residual:.3g} exceeds {RESIDUAL_TOL:g}"
        raise DefectiveMatrixError(msg)
    log.debug("eigendecompose dim=%d residual=%.3g condition=%.3g", dim, residual, condition)
    return SpectralDecomposition(eigenvalues, right, left, residual)


def mode_coefficients(decomp: SpectralDecomposition, state0: npt.ArrayLike) -> ModeCoefficients:
    """Return alpha = L . state0."""
    x0 = as_complex_vector(state0, decomp.dim)
    return ModeCoefficients(decomp.left_vectors @ x0)


def propagate(decomp: SpectralDecomposition, state0: npt.ArrayLike, t: float) -> ComplexVector:
    """Return sum_i exp(lambda_i t) alpha_i v_i for a single time t >= 0."""
    return propagate_many(decomp, state0, np.array([t]))[0]


def propagate_many(
    decomp: SpectralDecomposition, state0: npt.ArrayLike, times: npt.ArrayLike
) -> ComplexMatrix:
    """Propagate a state to every time in `times`; rows of the result are time samples."""
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    if np.any(t < 0):
        msg = "propagation times must be nonnegative"
        raise OutOfDomainError(msg)
    x0 = as_complex_vector(state0, decomp.dim)
    alphas = decomp.left_vectors @ x0
    weights = np.exp(np.outer(decomp.eigenvalues, t)) * alphas[:, None]
    samples = (decomp.right_vectors @ weights).T
    samples[t == 0] = x0
    return samples


def null_vector(matrix: npt.ArrayLike) -> ComplexVector:
    """Return the zero-eigenvalue right eigenvector normalized to unit component sum."""
    decomp = eigendecompose(matrix)
    magnitudes: RealVector = np.abs(decomp.eigenvalues)
    idx = int(np.argmin(magnitudes))
    if magnitudes[idx] > NULL_TOL:
        msg = f"smallest eigenvalue magnitude {magnitudes[idx]:.3g} exceeds {NULL_TOL:g}"
        raise NoNullSpaceError(msg)
    vector = np.array(decomp.right_vectors[:, idx])
    total = vector.sum()
    if abs(total) <= NULL_TOL:
        msg = "null vector has zero component sum and cannot be trace-normalized"
        raise NoNullSpaceError(msg)
    return vector / total


def as_time_grid(times: npt.ArrayLike) -> RealVector:
    """Validate a nonempty, nonnegative, strictly increasing time grid."""
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    if t.size == 0:
        msg = "time grid is empty"
        raise OutOfDomainError(msg, field="times")
    if np.any(t < 0) or np.any(np.diff(t) <= 0):
        msg = "times must be nonnegative and strictly increasing"
        raise OutOfDomainError(msg, field="times")
    return t
