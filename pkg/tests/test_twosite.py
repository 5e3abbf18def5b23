"""Tests for the two-site model, its generators and the strong-Mpemba decomposition."""

from __future__ import annotations

import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from mpemba_relax.errors import DegenerateSpectrumError, OutOfDomainError
from mpemba_relax.linalg import eigendecompose
from mpemba_relax.twosite import (
    GeneratorMode,
    StateOrdering,
    TwoSiteParams,
    TwoSiteState,
    build_generator,
    delta_decomposition,
    delta_matrix,
    derive_angles,
    evolve_two_site,
    global_to_local,
    is_strong_mpemba,
    local_to_global,
    occupation_table,
    positivity_violation,
    strong_mpemba_coefficients,
)
from mpemba_relax.twosite.generator import coherence_coupling


class TestTwoSiteModel:
    """Tests for parameters, states and derived quantities."""

    def test_equal_site_angles(self) -> None:
        angles = derive_angles(TwoSiteParams(delta=0.2))
        assert angles.theta == pytest.approx(math.pi / 2)
        assert angles.omega_prime1 == pytest.approx(1.2)
        assert angles.omega_prime2 == pytest.approx(0.8)

    def test_detuned_sites(self) -> None:
        angles = derive_angles(TwoSiteParams(omega1=1.5, omega2=0.5, delta=0.0))
        assert angles.omega_prime1 == pytest.approx(1.5)
        assert angles.omega_prime2 == pytest.approx(0.5)

    def test_degenerate_spectrum(self) -> None:
        with pytest.raises(DegenerateSpectrumError) as exc_info:
            derive_angles(TwoSiteParams(delta=0.0))
        assert exc_info.value.field == "delta"

    def test_nonpositive_rate(self) -> None:
        with pytest.raises(OutOfDomainError) as exc_info:
            TwoSiteParams(gamma2=0.0)
        assert exc_info.value.field == "gamma2"

    def test_occupation_table(self, entangled_params: TwoSiteParams) -> None:
        table = occupation_table(entangled_params)
        expected = 1.0 / (1.0 + math.exp(1.2 - 3.0))
        assert table.n.shape == (2, 2)
        assert table.n[0, 0] == pytest.approx(expected)
        assert table.mode_sums()[0] == pytest.approx(2 * expected)

    def test_biased_potentials(self) -> None:
        params = TwoSiteParams().biased(3.0, 1.0)
        assert params.bath1.mu == 4.0
        assert params.bath2.mu == 2.0

    def test_coherence_bound(self) -> None:
        with pytest.raises(OutOfDomainError) as exc_info:
            TwoSiteState((0.25, 0.25, 0.25, 0.25), 0.5)
        assert exc_info.value.field == "coherence"

    def test_populations_must_sum_to_one(self) -> None:
        with pytest.raises(OutOfDomainError):
            TwoSiteState((0.3, 0.3, 0.3, 0.3))

    def test_density_matrix(self) -> None:
        rho = TwoSiteState((0.1, 0.25, 0.65, 0.0), 0.2 + 0.1j).density_matrix()
        assert rho[1, 2] == 0.2 + 0.1j
        assert rho[2, 1] == 0.2 - 0.1j
        assert np.trace(rho).real == pytest.approx(1.0)


class TestGenerator:
    """Tests for build_generator."""

    @pytest.mark.parametrize("mode", list(GeneratorMode))
    def test_trace_preserving(self, coherent_params: TwoSiteParams, mode: GeneratorMode) -> None:
        gen = build_generator(coherent_params, mode)
        assert np.abs(gen.matrix[:4].sum(axis=0)).max() < 1e-14

    def test_dimensions(self, coherent_params: TwoSiteParams) -> None:
        assert build_generator(coherent_params).dim == 4
        assert build_generator(coherent_params, GeneratorMode.REDFIELD).dim == 6

    def test_symmetric_lindblad_spectrum(self, entangled_params: TwoSiteParams) -> None:
        decomp = eigendecompose(build_generator(entangled_params).matrix)
        assert decomp.eigenvalues.real.tolist() == pytest.approx(
            [0.0, -0.1, -0.1, -0.2], abs=1e-12
        )

    def test_redfield_adds_oscillating_pair(self, coherent_params: TwoSiteParams) -> None:
        decomp = eigendecompose(build_generator(coherent_params, GeneratorMode.REDFIELD).matrix)
        values = sorted(decomp.eigenvalues, key=lambda z: (round(z.real, 9), z.imag))
        assert values[0] == pytest.approx(-0.2, abs=1e-12)
        pair = [z for z in values if abs(z.imag) > 1e-6]
        assert pair == pytest.approx([-0.1 - 0.1j, -0.1 + 0.1j])

    def test_coupling_vanishes_for_equal_baths(self, entangled_params: TwoSiteParams) -> None:
        angles = derive_angles(entangled_params)
        table = occupation_table(entangled_params, angles)
        assert coherence_coupling(entangled_params, angles, table) == 0.0

    def test_coupling_present_for_unequal_baths(self, coherent_params: TwoSiteParams) -> None:
        angles = derive_angles(coherent_params)
        table = occupation_table(coherent_params, angles)
        assert abs(coherence_coupling(coherent_params, angles, table)) > 1e-3

    def test_orderings_are_permutations(self, coherent_params: TwoSiteParams) -> None:
        flipped = replace(coherent_params, ordering=StateOrdering.DOUBLY_OCCUPIED_FIRST)
        empty = build_generator(coherent_params, GeneratorMode.REDFIELD).matrix
        full = build_generator(flipped, GeneratorMode.REDFIELD).matrix
        perm = [3, 2, 1, 0, 5, 4]
        assert np.array_equal(full, empty[np.ix_(perm, perm)])


class TestEvolveTwoSite:
    """Tests for evolve_two_site."""

    def test_trace_conserved(
        self,
        coherent_params: TwoSiteParams,
        coherent_states: tuple[TwoSiteState, TwoSiteState],
    ) -> None:
        gen = build_generator(coherent_params, GeneratorMode.REDFIELD)
        traj = evolve_two_site(gen, coherent_states[0], np.linspace(0.0, 100.0, 201))
        assert np.abs(traj.populations.sum(axis=1) - 1.0).max() < 1e-9
        assert traj.coherences[0] == pytest.approx(0.2)
        assert traj.worst_violation < 1e-4

    def test_lindblad_drops_coherence(
        self,
        coherent_params: TwoSiteParams,
        coherent_states: tuple[TwoSiteState, TwoSiteState],
        caplog: pytest.LogCaptureFixture,
    ) -> None:
        gen = build_generator(coherent_params)
        with caplog.at_level(logging.WARNING):
            traj = evolve_two_site(gen, coherent_states[0], [0.0, 1.0])
        assert traj.coherence_dropped
        assert np.all(traj.coherences == 0)
        assert "ignores the initial coherence" in caplog.text

    def test_density_matrices(
        self, entangled_params: TwoSiteParams, entangled_states: tuple[TwoSiteState, TwoSiteState]
    ) -> None:
        gen = build_generator(entangled_params)
        traj = evolve_two_site(gen, entangled_states[0], [0.0, 5.0])
        rho = traj.density_matrices()
        assert rho.shape == (2, 4, 4)
        assert np.diag(rho[0]).real.tolist() == pytest.approx([0.0, 0.2, 0.7, 0.1])

    def test_positivity_violation(self) -> None:
        populations = np.array([[0.5, 0.25, 0.25, 0.0], [-0.01, 0.5, 0.5, 0.01]])
        assert positivity_violation(populations, np.zeros(2)) == pytest.approx(0.01)
        assert positivity_violation(populations[:1], np.array([0.3])) == pytest.approx(0.05)


class TestStrongMpemba:
    """Tests for the delta-matrix decomposition of symmetric Lindblad dynamics."""

    def test_rows_are_left_eigenvectors(self, entangled_params: TwoSiteParams) -> None:
        rows = delta_matrix(entangled_params)
        m = build_generator(entangled_params).matrix.real
        gamma = entangled_params.gamma1
        for row, rate in zip(rows, [-4 * gamma, -2 * gamma, -2 * gamma, 0.0], strict=True):
            assert np.abs(row @ m - rate * row).max() < 1e-12

    def test_trace_row(self, entangled_params: TwoSiteParams) -> None:
        row = delta_matrix(entangled_params)[3]
        assert np.all(row == row[0])

    def test_decomposition_is_biorthonormal(self, entangled_params: TwoSiteParams) -> None:
        decomp = delta_decomposition(entangled_params)
        assert decomp.residual < 1e-9

    def test_fast_mode_only_state_is_strong(self, entangled_params: TwoSiteParams) -> None:
        right = delta_decomposition(entangled_params).right_vectors.real
        steady = right[:, 3] / right[:, 3].sum()
        p = steady + 1e-3 * right[:, 0] / np.abs(right[:, 0]).max()
        state = TwoSiteState((p[0], p[1], p[2], p[3]))
        assert is_strong_mpemba(strong_mpemba_coefficients(entangled_params, state))

    def test_generic_state_is_not_strong(
        self, entangled_params: TwoSiteParams, entangled_states: tuple[TwoSiteState, TwoSiteState]
    ) -> None:
        coefficients = strong_mpemba_coefficients(entangled_params, entangled_states[0])
        assert not is_strong_mpemba(coefficients)

    def test_requires_symmetric_sites(self) -> None:
        with pytest.raises(OutOfDomainError):
            delta_matrix(TwoSiteParams(omega1=1.2, omega2=0.8))

    def test_requires_lindblad(self, entangled_params: TwoSiteParams) -> None:
        with pytest.raises(OutOfDomainError) as exc_info:
            delta_matrix(entangled_params, GeneratorMode.REDFIELD)
        assert exc_info.value.field == "mode"


class TestBasisChange:
    """Tests for global_to_local and local_to_global."""

    def test_local_coherence(self) -> None:
        rho = TwoSiteState((0.0, 0.2, 0.7, 0.1)).density_matrix()
        local = global_to_local(rho)
        assert abs(local[1, 2]) == pytest.approx(0.25)
        assert local[1, 1].real == pytest.approx(0.45)

    def test_round_trip(self, coherent_states: tuple[TwoSiteState, TwoSiteState]) -> None:
        rho = coherent_states[0].density_matrix()
        assert np.abs(local_to_global(global_to_local(rho)) - rho).max() < 1e-14

    def test_stacked_matrices(self) -> None:
        stack = np.stack([np.eye(4) / 4, TwoSiteState((0.0, 0.2, 0.7, 0.1)).density_matrix()])
        assert global_to_local(stack).shape == (2, 4, 4)

    def test_requires_equal_sites(self) -> None:
        rho = np.eye(4) / 4
        with pytest.raises(OutOfDomainError):
            global_to_local(rho, TwoSiteParams(omega1=1.2, omega2=0.8))
