import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bogoliubov.diagonalizer import bosonic_diagonalize
from bogoliubov.errors import DimensionMismatch, NotNormalized, SizeOverflow, TruncationUnreliable
from bogoliubov.fock import (
    build_basis,
    build_quadratic_hamiltonian,
    excitation_levels,
    ground_state,
    ladder_matrices,
    lower_bound_check,
    lower_bound_sandwich_check,
    lower_bounds,
    lowest_eigenpairs,
    number_operator,
    one_particle_density_matrices,
    quadratic_form_energy,
    second_quantize,
    verify_spectrum,
)
from bogoliubov.generate import generate
from bogoliubov.nambu import validate_problem

from conftest import random_hermitian, random_symmetric, seeds


class TestBasis:
    def test_single_mode(self):
        b = build_basis(1, 3)
        assert b.states == ((0,), (1,), (2,), (3,))

    def test_dimensions(self):
        assert build_basis(2, 2).dim == 6
        assert build_basis(3, 14).dim == 680

    @given(st.integers(1, 4), st.integers(0, 6))
    def test_graded_and_complete(self, modes, n_max):
        b = build_basis(modes, n_max)
        assert b.dim == comb(modes + n_max, modes)
        assert list(b.shells) == sorted(b.shells)
        assert all(sum(s) == N for s, N in zip(b.states, b.shells))
        assert len(set(b.states)) == b.dim
        assert all(b.index(s) == i for i, s in enumerate(b.states))

    def test_cap(self):
        with pytest.raises(SizeOverflow):
            build_basis(6, 30, cap=1000)

    def test_invalid(self):
        with pytest.raises(ValueError):
            build_basis(0, 3)


class TestLadders:
    def test_textbook_matrix(self):
        (a, ad), = ladder_matrices(build_basis(1, 2))
        assert np.allclose(a.toarray(), [[0, 1, 0], [0, 0, np.sqrt(2)], [0, 0, 0]])
        assert np.allclose(ad.toarray(), a.toarray().T)

    @given(st.integers(1, 3), st.integers(1, 6))
    def test_ccr_on_safe_sector(self, modes, n_max):
        b = build_basis(modes, n_max)
        ops = ladder_matrices(b)
        safe = np.flatnonzero(b.shells <= n_max - 1)
        for (i, (ai, adi)), (j, (aj, adj)) in itertools.product(enumerate(ops), repeat=2):
            comm = (ai @ adj - adj @ ai).toarray()[np.ix_(safe, safe)]
            # sqrt(n)^2 reproduces n only up to one rounding
            assert np.abs(comm - np.eye(len(safe)) * (i == j)).max() <= 4 * np.finfo(float).eps * n_max
            assert np.abs((ai @ aj - aj @ ai).toarray()).max() <= 4 * np.finfo(float).eps * n_max

    def test_number_operator(self):
        b = build_basis(2, 3)
        ops = ladder_matrices(b)
        N = sum(ad @ a for a, ad in ops).toarray()
        assert np.allclose(N, number_operator(b).dense())


class TestHamiltonian:
    def test_zero_pairing_spectrum(self):
        h = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
        e = np.linalg.eigvalsh(h)
        b = build_basis(2, 4)
        w = np.linalg.eigvalsh(build_quadratic_hamiltonian(b, validate_problem(h, np.zeros((2, 2)))).dense())
        ref = sorted(m * e[0] + n * e[1] for m in range(5) for n in range(5) if m + n <= 4)
        assert np.allclose(w, ref)

    def test_single_mode_levels(self, single_mode):
        b = build_basis(1, 40)
        w, _ = lowest_eigenpairs(build_quadratic_hamiltonian(b, single_mode), 2)
        assert w[0] == pytest.approx(-0.1, abs=1e-8)
        assert w[1] == pytest.approx(0.7, abs=1e-8)

    def test_mode_mismatch(self, single_mode):
        with pytest.raises(DimensionMismatch):
            build_quadratic_hamiltonian(build_basis(2, 2), single_mode)

    @given(seeds, st.integers(1, 3))
    def test_hermitian(self, seed, n):
        rng = np.random.default_rng(seed)
        p = validate_problem(random_hermitian(rng, n) + 3 * n * np.eye(n), random_symmetric(rng, n))
        H = build_quadratic_hamiltonian(build_basis(n, 4), p).dense()
        assert np.allclose(H, H.conj().T, atol=1e-12)

    def test_truncated_levels_are_upper_bounds(self, two_mode):
        exact = excitation_levels(bosonic_diagonalize(two_mode).xi_spectrum, -0.11304809669083504, 4)
        for n_max in (4, 8, 12):
            w, _ = lowest_eigenpairs(build_quadratic_hamiltonian(build_basis(2, n_max), two_mode), 4)
            assert np.all(w >= exact - 1e-12)


class TestDensityMatrices:
    def test_vacuum(self):
        b = build_basis(2, 3)
        psi = np.zeros(b.dim)
        psi[0] = 1.0
        pair = one_particle_density_matrices(b, psi)
        assert np.all(pair.gamma.entries == 0) and np.all(pair.alpha.entries == 0)

    def test_one_particle(self):
        b = build_basis(2, 3)
        psi = np.zeros(b.dim)
        psi[b.index((1, 0))] = 1.0
        pair = one_particle_density_matrices(b, psi)
        assert np.allclose(pair.gamma.entries, np.diag([1.0, 0.0]))
        assert np.all(pair.alpha.entries == 0)

    def test_not_normalized(self):
        b = build_basis(1, 3)
        with pytest.raises(NotNormalized):
            one_particle_density_matrices(b, np.ones(b.dim))

    def test_single_mode_ground_state(self, single_mode):
        _, psi, b = ground_state(single_mode, 40)
        pair = one_particle_density_matrices(b, psi)
        assert pair.gamma.entries[0, 0].real == pytest.approx(0.125, abs=5e-8)
        assert abs(pair.alpha.entries[0, 0]) == pytest.approx(0.375, abs=5e-8)
        assert quadratic_form_energy(pair, single_mode) == pytest.approx(-0.1, abs=5e-8)

    @given(seeds, st.integers(1, 3))
    def test_block_matrix_is_positive(self, seed, n):
        rng = np.random.default_rng(seed)
        b = build_basis(n, 4)
        psi = rng.standard_normal(b.dim) + 1j * rng.standard_normal(b.dim)
        pair = one_particle_density_matrices(b, psi / np.linalg.norm(psi))
        assert np.linalg.eigvalsh(pair.block_matrix())[0] >= -1e-9
        assert pair.invariants_ok()
        assert np.allclose(pair.alpha.entries, pair.alpha.entries.T)


class TestQuadraticForm:
    def test_vacuum(self, two_mode):
        b = build_basis(2, 2)
        psi = np.zeros(b.dim)
        psi[0] = 1.0
        assert quadratic_form_energy(one_particle_density_matrices(b, psi), two_mode) == 0.0

    @given(seeds, st.integers(1, 3))
    def test_matches_direct_expectation(self, seed, n):
        rng = np.random.default_rng(seed)
        p = validate_problem(random_hermitian(rng, n) + 3 * n * np.eye(n), random_symmetric(rng, n))
        n_max = 4
        b = build_basis(n, n_max)
        psi = rng.standard_normal(b.dim) + 1j * rng.standard_normal(b.dim)
        psi[b.shells > n_max - 2] = 0.0
        psi /= np.linalg.norm(psi)
        H = build_quadratic_hamiltonian(b, p).dense()
        direct = np.vdot(psi, H @ psi).real
        pair = one_particle_density_matrices(b, psi)
        assert quadratic_form_energy(pair, p) == pytest.approx(direct, abs=1e-9)

    def test_dimension_mismatch(self, single_mode, two_mode):
        _, psi, b = ground_state(single_mode, 5)
        with pytest.raises(DimensionMismatch):
            quadratic_form_energy(one_particle_density_matrices(b, psi), two_mode)


class TestVerifySpectrum:
    def test_zero_pairing_is_exact(self):
        p = validate_problem(np.diag([1.0, 1.5]), np.zeros((2, 2)))
        rep = verify_spectrum(p, bosonic_diagonalize(p), 6, 5)
        assert np.max(rep.level_errors) <= 1e-14
        assert rep.gamma_error == 0.0 and rep.alpha_error == 0.0

    def test_single_mode(self, single_mode):
        rep = verify_spectrum(single_mode, bosonic_diagonalize(single_mode), 40, 6)
        assert np.allclose(rep.levels, [-0.1, 0.7, 1.5, 2.3, 3.1, 3.9], atol=1e-8)
        assert np.max(rep.level_errors) <= 1e-8

    def test_two_mode(self, two_mode):
        rep = verify_spectrum(two_mode, bosonic_diagonalize(two_mode), 24, 6)
        gaps = [0.0, 0.8660254037844386, 1.7320508075688772, 1.9078784028338913,
                2.598076211353316, 2.77390380661833]
        assert np.allclose(rep.levels, -0.11304809669083504 + np.array(gaps), atol=1e-6)
        assert rep.tail_weight <= 1e-8

    def test_heavy_tail(self, single_mode):
        with pytest.raises(TruncationUnreliable) as info:
            verify_spectrum(single_mode, bosonic_diagonalize(single_mode), 4, 2)
        assert info.value.report.tail_weight > 1e-6

    def test_error_decreases_with_cutoff(self):
        p = validate_problem(np.eye(1), 0.8 * np.eye(1))
        r = bosonic_diagonalize(p)
        errs = []
        for n_max in (10, 20, 30, 40, 50):
            try:
                errs.append(verify_spectrum(p, r, n_max, 1).level_errors[0])
            except TruncationUnreliable as exc:
                errs.append(exc.report.level_errors[0])
        assert all(b <= 1.1 * a for a, b in zip(errs, errs[1:]))

    def test_excitation_levels(self):
        assert np.allclose(excitation_levels([1.0, 3.0], -1.0, 5), [-1, 0, 1, 2, 2])


class TestLowerBounds:
    def test_zero_pairing(self):
        p = validate_problem(np.eye(2), np.zeros((2, 2)))
        assert lower_bounds(p) == (0.0, 0.0)
        assert lower_bound_check(p, 0.0)

    def test_single_mode_point_six(self, single_mode):
        half, refined = lower_bounds(single_mode)
        assert half == pytest.approx(-0.18)
        assert refined == pytest.approx(-0.108)
        assert lower_bound_check(single_mode, -0.1)

    def test_refined_bound_fails_for_weak_coupling(self):
        # h = 1, k = 0.3: E0 = (sqrt(0.91) - 1)/2 = -0.02303... lies below
        # -(0.3/2) * 0.09 = -0.0135, so the refined bound is violated.
        p = validate_problem(np.eye(1), 0.3 * np.eye(1))
        e0 = bosonic_diagonalize(p).ground_energy
        half, refined = lower_bounds(p)
        assert e0 == pytest.approx(-0.02303039929152717, abs=1e-12)
        assert e0 >= half
        assert e0 < refined
        assert not lower_bound_check(p, e0)

    @given(st.sampled_from(["random", "laplacian", "commutative"]), st.integers(1, 6),
           st.floats(0.05, 0.9), seeds)
    def test_half_trace_bound_always_holds(self, kind, modes, g, seed):
        p = generate(kind, modes, g, seed)
        half, _ = lower_bounds(p)
        assert bosonic_diagonalize(p).ground_energy >= half - 1e-10

    def test_sandwich_single_mode(self, single_mode):
        rep = lower_bound_sandwich_check(single_mode, 40)
        assert rep["lower_ok_proof"] and rep["upper_ok_proof"]
        assert not rep["lower_ok_stated"] and not rep["upper_ok_stated"]
        assert rep["constant_proof"] == pytest.approx(0.3)
        assert rep["constant_stated"] == pytest.approx(0.108)

    @given(seeds, st.floats(0.1, 0.8))
    def test_sandwich_proof_constant_holds(self, seed, g):
        p = generate("random", 2, g, seed)
        rep = lower_bound_sandwich_check(p, 10)
        assert rep["lower_ok_proof"] and rep["upper_ok_proof"]


def test_second_quantize_number_operator():
    b = build_basis(3, 3)
    assert np.allclose(second_quantize(b, np.eye(3)).dense(), number_operator(b).dense())
