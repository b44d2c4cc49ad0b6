import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bogoliubov.errors import DimensionMismatch, NotPositive, NotSymmetric, NotSymmetricPairing
from bogoliubov.nambu import (
    BlockOperator,
    BogoliubovMap,
    assemble_block_hamiltonian,
    gram_pairing,
    kh_inv_norms,
    pairing_trace,
    shale_check,
    swap_conjugate,
    validate_bogoliubov,
    validate_problem,
)

from conftest import problems, random_hermitian, random_symmetric, seeds


class TestValidateProblem:
    def test_zero_pairing(self):
        p = validate_problem(np.diag([1.0, 2.0]), np.zeros((2, 2)))
        assert p.dim == 2
        assert p.h_min == pytest.approx(1.0)

    def test_symmetric_real_pairing(self):
        validate_problem(np.diag([1.0, 2.0]), [[0, 0.1], [0.1, 0]])

    def test_antisymmetric_pairing(self):
        with pytest.raises(NotSymmetricPairing):
            validate_problem(np.diag([1.0, 2.0]), [[0, 0.1], [-0.1, 0]])

    def test_nonpositive_h(self):
        with pytest.raises(NotPositive):
            validate_problem(np.diag([1.0, 0.0]), np.zeros((2, 2)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            validate_problem(np.eye(2), np.zeros((3, 3)))

    def test_supercritical_accepted_with_warning(self, caplog):
        with caplog.at_level(logging.WARNING):
            p = validate_problem(np.eye(1), 1.2 * np.eye(1))
        assert gram_pairing(p).norm == pytest.approx(1.2)
        assert ">= 1" in caplog.text


class TestGramPairing:
    def test_diagonal_hand_computation(self):
        p = validate_problem(np.diag([1.0, 4.0]), np.diag([0.5, 1.0]))
        gp = gram_pairing(p)
        assert np.allclose(gp.M_G.entries, np.diag([0.5, 0.25]))
        assert gp.norm == pytest.approx(0.5)

    def test_zero(self):
        gp = gram_pairing(validate_problem(np.eye(3), np.zeros((3, 3))))
        assert gp.norm == 0.0 and gp.hs_norm == 0.0

    @given(seeds, st.integers(1, 8))
    def test_commutative_norm_is_max_ratio(self, seed, n):
        rng = np.random.default_rng(seed)
        h = rng.uniform(0.5, 2.0, n)
        k = rng.uniform(-1.0, 1.0, n) * h * rng.uniform(0, 1.5)
        gp = gram_pairing(validate_problem(np.diag(h), np.diag(k)))
        assert gp.norm == pytest.approx(np.max(np.abs(k) / h), rel=1e-12, abs=1e-15)

    @given(problems())
    def test_operator_norm_below_hs_norm(self, p):
        gp = gram_pairing(p)
        assert gp.norm <= gp.hs_norm * (1 + 1e-12)

    @given(problems())
    def test_pairing_trace_is_hs_norm_squared(self, p):
        # with h = L L^* the trace equals ||K L^{-*}||_HS^2
        r = np.linalg.inv(np.linalg.cholesky(p.h.entries).conj().T)
        hs = np.linalg.norm(p.K.entries @ r, "fro") ** 2
        assert pairing_trace(p) == pytest.approx(hs, rel=1e-9)


class TestBlockHamiltonian:
    def test_single_mode(self):
        A = assemble_block_hamiltonian(validate_problem(np.eye(1), 0.6 * np.eye(1)))
        assert np.allclose(A.matrix, [[1, 0.6], [0.6, 1]])
        assert np.allclose(np.linalg.eigvalsh(A.matrix), [0.4, 1.6])

    def test_zero_pairing_is_block_diagonal(self):
        h = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
        A = assemble_block_hamiltonian(validate_problem(h, np.zeros((2, 2))))
        hh, hk, kh, hc = A.blocks
        assert np.allclose(hh, h) and np.allclose(hc, h.conj())
        assert np.all(hk == 0) and np.all(kh == 0)

    @given(problems(g_hi=0.95))
    def test_positive_below_critical(self, p):
        A = assemble_block_hamiltonian(p)
        assert np.linalg.eigvalsh(A.matrix)[0] > 0
        assert np.allclose(swap_conjugate(A.matrix), A.matrix)

    def test_block_operator_checks_flavor(self):
        with pytest.raises(NotSymmetric):
            BlockOperator(np.diag([1.0, -1.0]), flavor="symmetric")
        B = BlockOperator(np.diag([1.0, -1.0]), flavor="antisymmetric")
        assert B.n == 1

    def test_block_operator_needs_even_dimension(self):
        with pytest.raises(DimensionMismatch):
            BlockOperator(np.eye(3))

    @given(seeds, st.integers(1, 5))
    def test_swap_conjugate_is_involution(self, seed, n):
        M = random_hermitian(np.random.default_rng(seed), 2 * n)
        assert np.allclose(swap_conjugate(swap_conjugate(M)), M)


class TestBogoliubovMap:
    def test_identity(self):
        n = 3
        c = validate_bogoliubov(BogoliubovMap(np.eye(n), np.zeros((n, n))))
        assert c.passed
        assert max(c.relation_residuals.values()) == 0.0

    @given(st.floats(-3.0, 3.0))
    def test_hyperbolic_rotation(self, t):
        m = BogoliubovMap([[np.cosh(t)]], [[np.sinh(t)]])
        assert validate_bogoliubov(m, tol=1e-9 * np.cosh(t) ** 2).passed

    def test_identity_plus_identity_fails(self):
        assert not validate_bogoliubov(BogoliubovMap(np.eye(2), np.eye(2))).passed

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            BogoliubovMap(np.eye(2), np.eye(3))

    def test_shale_zero(self):
        assert shale_check(BogoliubovMap(np.eye(2), np.zeros((2, 2)))).v_hs == 0.0

    @given(seeds, st.integers(1, 6))
    def test_shale_matches_trace_of_x(self, seed, n):
        rng = np.random.default_rng(seed)
        V = random_symmetric(rng, n)
        m = BogoliubovMap(np.eye(n), V)
        assert shale_check(m).v_hs ** 2 == pytest.approx(np.trace(m.X).real, rel=1e-12)


def test_kh_inverse_norms_commutative():
    p = validate_problem(np.diag([1.0, 0.1]), np.diag([0.5, 0.09]))
    op, hs = kh_inv_norms(p)
    assert op == pytest.approx(0.9)
    assert hs == pytest.approx(np.hypot(0.5, 0.9))
