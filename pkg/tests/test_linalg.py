"""Tests for the dense eigensystem, spectral propagation and the RK4 oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from mpemba_relax.errors import (
    DefectiveMatrixError,
    DimensionMismatchError,
    InvalidStepError,
    NoNullSpaceError,
    OutOfDomainError,
)
from mpemba_relax.linalg import (
    as_time_grid,
    eigendecompose,
    matrix_generator,
    mode_coefficients,
    null_vector,
    propagate,
    propagate_many,
    rk4_integrate,
)
from mpemba_relax.qdot import OccupationFactors, build_transition_matrix


def dot_matrix(f0: float, f1: float) -> np.ndarray:
    return build_transition_matrix(OccupationFactors(f0, f1))


class TestEigendecompose:
    """Tests for eigendecompose."""

    def test_sorted_by_descending_real_part(self) -> None:
        decomp = eigendecompose(np.diag([-3.0, 0.0, -1.0]))
        assert decomp.eigenvalues.real.tolist() == pytest.approx([0.0, -1.0, -3.0])

    def test_conjugate_pair_ordered_by_imaginary_part(self) -> None:
        decomp = eigendecompose(np.array([[-1.0, 2.0], [-2.0, -1.0]]))
        assert decomp.eigenvalues[0] == pytest.approx(-1 - 2j)
        assert decomp.eigenvalues[1] == pytest.approx(-1 + 2j)

    def test_biorthonormal(self) -> None:
        m = dot_matrix(1.4621, 0.8756)
        decomp = eigendecompose(m)
        assert np.max(np.abs(decomp.left_vectors @ decomp.right_vectors - np.eye(4))) < 1e-9
        residual = m @ decomp.right_vectors - decomp.right_vectors * decomp.eigenvalues
        assert np.max(np.abs(residual)) < 1e-9
        assert decomp.residual < 1e-9

    def test_degenerate_but_diagonalizable(self) -> None:
        decomp = eigendecompose(dot_matrix(1.0, 1.0))
        assert decomp.eigenvalues.real.tolist() == pytest.approx([0.0, -2.0, -2.0, -4.0])
        assert decomp.residual < 1e-9

    def test_defective_matrix(self) -> None:
        with pytest.raises(DefectiveMatrixError):
            eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_non_square(self) -> None:
        with pytest.raises(DimensionMismatchError):
            eigendecompose(np.zeros((2, 3)))

    def test_non_finite(self) -> None:
        with pytest.raises(OutOfDomainError):
            eigendecompose(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_result_is_read_only(self) -> None:
        decomp = eigendecompose(np.diag([-1.0, -2.0]))
        with pytest.raises(ValueError, match="read-only"):
            decomp.eigenvalues[0] = 1.0


class TestModeCoefficients:
    """Tests for mode_coefficients."""

    def test_right_eigenvector_selects_its_mode(self) -> None:
        decomp = eigendecompose(dot_matrix(1.3, 0.7))
        alphas = mode_coefficients(decomp, decomp.right_vectors[:, 2]).alphas
        assert np.abs(alphas - np.eye(4)[2]).max() < 1e-9

    def test_uniform_state_is_steady_at_unit_occupations(self) -> None:
        decomp = eigendecompose(dot_matrix(1.0, 1.0))
        alphas = mode_coefficients(decomp, np.full(4, 0.25)).alphas
        assert alphas[0] == pytest.approx(1.0, abs=1e-9)
        assert np.abs(alphas[1:]).max() < 1e-9

    def test_steady_column_is_probability_normalized(self) -> None:
        decomp = eigendecompose(dot_matrix(1.4621, 0.8756))
        assert decomp.right_vectors[:, 0].sum() == pytest.approx(1.0, abs=1e-12)
        product = decomp.left_vectors @ decomp.right_vectors
        assert np.abs(product - np.eye(4)).max() < 1e-9
        alphas = mode_coefficients(decomp, decomp.right_vectors[:, 0]).alphas
        assert alphas[0] == pytest.approx(1.0, abs=1e-9)

    def test_reconstruction(self) -> None:
        decomp = eigendecompose(dot_matrix(1.5, 0.4))
        x = np.array([0.1, 0.2, 0.3, 0.4])
        coefficients = mode_coefficients(decomp, x)
        assert np.abs(coefficients.reconstruct(decomp) - x).max() < 1e-12

    def test_dimension_mismatch(self) -> None:
        decomp = eigendecompose(np.diag([-1.0, -2.0]))
        with pytest.raises(DimensionMismatchError):
            mode_coefficients(decomp, [1.0, 0.0, 0.0])


class TestPropagate:
    """Tests for propagate and propagate_many."""

    def test_time_zero_is_identity(self) -> None:
        decomp = eigendecompose(dot_matrix(1.2, 0.9))
        x = np.array([0.4, 0.3, 0.2, 0.1])
        assert np.abs(propagate(decomp, x, 0.0) - x).max() < 1e-12

    def test_time_zero_rows_are_exact(self) -> None:
        decomp = eigendecompose(dot_matrix(1.7, 0.3))
        x = np.array([0.1, 0.2, 0.3, 0.4])
        samples = propagate_many(decomp, x, [0.0, 0.5])
        assert np.array_equal(samples[0], x.astype(complex))
        assert not np.array_equal(samples[1], x.astype(complex))

    def test_agrees_with_rk4(self) -> None:
        m = dot_matrix(1.4621, 0.8756)
        decomp = eigendecompose(m)
        x = np.array([0.7, 0.1, 0.15, 0.05])
        spectral = propagate(decomp, x, 5.0)
        stepped = rk4_integrate(matrix_generator(m), x, 5.0, 1e-3)
        assert np.abs(spectral - stepped).max() < 1e-8

    def test_rows_follow_times(self) -> None:
        decomp = eigendecompose(np.diag([-1.0, -2.0]))
        samples = propagate_many(decomp, [1.0, 1.0], [0.0, 1.0, 2.0])
        assert samples.shape == (3, 2)
        assert samples[2, 1].real == pytest.approx(math.exp(-4.0))

    def test_negative_time(self) -> None:
        decomp = eigendecompose(np.diag([-1.0]))
        with pytest.raises(OutOfDomainError):
            propagate(decomp, [1.0], -1.0)


class TestRk4Integrate:
    """Tests for rk4_integrate."""

    def test_scalar_exponential(self) -> None:
        result = rk4_integrate(matrix_generator([[-1.0]]), [1.0], 1.0, 1e-3)
        assert result[0].real == pytest.approx(0.367879441171, abs=1e-10)

    def test_zero_end_time_returns_state(self) -> None:
        result = rk4_integrate(matrix_generator([[-1.0]]), [0.3], 0.0)
        assert result[0] == 0.3

    def test_last_step_lands_on_end_time(self) -> None:
        result = rk4_integrate(matrix_generator([[-1.0]]), [1.0], 0.25, 0.1)
        assert result[0].real == pytest.approx(math.exp(-0.25), abs=1e-6)

    @pytest.mark.parametrize("dt", [0.0, -0.1])
    def test_invalid_step(self, dt: float) -> None:
        with pytest.raises(InvalidStepError):
            rk4_integrate(matrix_generator([[-1.0]]), [1.0], 1.0, dt)


class TestNullVector:
    """Tests for null_vector."""

    def test_unit_occupations_give_uniform_state(self) -> None:
        v = null_vector(dot_matrix(1.0, 1.0))
        assert v.real.tolist() == pytest.approx([0.25] * 4)

    def test_matches_closed_form_steady_state(self) -> None:
        f0, f1 = 1.4621, 1.2689
        v = null_vector(dot_matrix(f0, f1))
        expected = np.array([f0 * f1, f0 * (2 - f1), f0 * (2 - f1), (2 - f0) * (2 - f1)])
        assert np.abs(v - expected / expected.sum()).max() < 1e-9

    def test_no_zero_eigenvalue(self) -> None:
        with pytest.raises(NoNullSpaceError):
            null_vector(np.diag([-1.0, -2.0]))


class TestTimeGrid:
    """Tests for as_time_grid."""

    def test_accepts_increasing_grid(self) -> None:
        assert as_time_grid([0.0, 0.5, 1.0]).tolist() == [0.0, 0.5, 1.0]

    @pytest.mark.parametrize("times", [[], [0.0, 0.0], [1.0, 0.5], [-1.0, 0.0]])
    def test_rejects_invalid_grid(self, times: list[float]) -> None:
        with pytest.raises(OutOfDomainError) as exc_info:
            as_time_grid(times)
        assert exc_info.value.field == "times"
