"""Constructive Bogoliubov diagonalization and its certificates.

The pipeline is

    A = [[h, conj K], [K, conj h]]          (positive iff ||G|| < 1)
    B = A^{1/2} S A^{1/2}                    (anticommutes with the swap J)
    U B U* = diag(xi, -conj xi)              (fermionic block diagonalization)
    V = U |B|^{1/2} A^{-1/2}                 (bosonic Bogoliubov map)

after which ``V A V* = diag(xi, conj xi)``. Everything downstream of ``V`` is a
check: operator-norm and Hilbert-Schmidt bounds, the Loewner sandwich between
``|B|`` and ``A``, the linear equations satisfied by ``X = V*V`` and
``Y = U^T V``, and the ground-state energy bounds.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GapViolation, NotAntisymmetric, NotHermitian, OddKernel
from .linalg import HermitianMatrix, hermitian_function, opnorm, psd_dominates, takagi_factorize
from .nambu import (
    BLOCK_TOL,
    BlockOperator,
    BogoliubovMap,
    Problem,
    assemble_block_hamiltonian,
    gram_pairing,
    pairing_trace,
    swap_conjugate,
    symplectic_sign,
    validate_bogoliubov,
)

log = logging.getLogger(__name__)

KERNEL_TOL = 1e-12
BOUND_SLACK = 1e-9
ENERGY_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class FermionicDiagonalization:
    unitary: np.ndarray
    xi: HermitianMatrix
    kernel_dim: int = 0
    offdiag_residual: float = 0.0


@dataclass(frozen=True)
class CertificateBundle:
    g_norm: float
    g_hs: float
    v_opnorm: float
    v_opnorm_bound: float
    v_opnorm_bound_ok: bool
    v_hs: float
    v_hs_bound: float
    v_hs_bound_ok: bool
    sandwich_ok: bool
    pairing_bound_ok: bool
    bogoliubov_residuals: dict
    bogoliubov_ok: bool
    offdiag_residual: float
    diagonal_residual: float
    diag_eq_residuals: tuple
    diag_eq_ok: bool
    joint_structure_residual: float
    joint_identity_residual: float
    joint_structure_ok: bool
    xi_min: float
    xi_positive: bool
    lower_bound: float
    lower_bound_ok: bool

    @property
    def passed(self) -> bool:
        return all(
            (
                self.v_opnorm_bound_ok,
                self.v_hs_bound_ok,
                self.sandwich_ok,
                self.pairing_bound_ok,
                self.bogoliubov_ok,
                self.diag_eq_ok,
                self.joint_structure_ok,
                self.xi_positive,
                self.lower_bound_ok,
            )
        )

    def failures(self) -> dict:
        """Name -> violating value for every failed check."""
        out = {}
        if not self.v_opnorm_bound_ok:
            out["v_opnorm_bound"] = self.v_opnorm
        if not self.v_hs_bound_ok:
            out["v_hs_bound"] = self.v_hs
        if not self.sandwich_ok:
            out["sandwich"] = False
        if not self.pairing_bound_ok:
            out["pairing_bound"] = False
        if not self.bogoliubov_ok:
            out["bogoliubov"] = max(self.bogoliubov_residuals.values())
        if not self.diag_eq_ok:
            out["diag_eq"] = max(self.diag_eq_residuals)
        if not self.joint_structure_ok:
            out["joint_structure"] = max(
                self.joint_structure_residual, self.joint_identity_residual
            )
        if not self.xi_positive:
            out["xi_min"] = self.xi_min
        if not self.lower_bound_ok:
            out["lower_bound"] = self.lower_bound
        return out


@dataclass(frozen=True, eq=False)
class DiagonalizationResult:
    map: BogoliubovMap
    xi: HermitianMatrix
    delta: float
    ground_energy: float
    g_norm: float
    g_hs: float
    block_A: BlockOperator
    block_B: BlockOperator
    unitary: np.ndarray
    certificates: Optional[CertificateBundle] = None

    @property
    def xi_spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.xi.entries)

    @property
    def full_map(self) -> np.ndarray:
        return self.map.matrix


@dataclass(frozen=True)
class BoundsReport:
    v_opnorm: float
    v_opnorm_bound: float
    v_opnorm_bound_ok: bool
    v_hs: float
    v_hs_bound: float
    v_hs_bound_ok: bool
    sandwich_ok: bool
    pairing_bound_ok: bool


@dataclass(frozen=True, eq=False)
class QuasiFreeStructure:
    basis: np.ndarray
    lambdas: np.ndarray
    residual: float
    identity_residual: float


def haar_unitary(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _swap(n: int) -> np.ndarray:
    Z = np.zeros((n, n))
    eye = np.eye(n)
    return np.block([[Z, eye], [eye, Z]])


def _jvec(W: np.ndarray) -> np.ndarray:
    """Apply the swap-conjugation J(f, g) = (conj g, conj f) to columns."""
    n = W.shape[0] // 2
    return np.vstack([W[n:].conj(), W[:n].conj()])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    a = v[i]
    return v * (abs(a) / a) if a != 0 else v


def signed_block(A: BlockOperator) -> BlockOperator:
    """B = A^{1/2} S A^{1/2}."""
    root = hermitian_function(A.matrix, "sqrt").entries
    S = symplectic_sign(A.n)
    B = root @ S @ root
    B = 0.5 * (B + B.conj().T)
    return BlockOperator(B, flavor="antisymmetric")


def fermionic_block_diagonalize(B, gauge_seed: Optional[int] = None) -> FermionicDiagonalization:
    """Unitary U commuting with J such that ``U B U* = diag(xi, -conj xi)``.

    The first n columns of ``U*`` are an orthonormal basis of the positive
    spectral subspace of B (eigenvectors, eigenvalues descending, largest
    entry made real positive) followed by half of the kernel: a real basis of
    the kernel under J is obtained by a Takagi factorization and paired as
    ``(u_{2j} + i u_{2j-1})/sqrt 2``. The last n columns are their J-images.

    Args:
        B: self-adjoint 2n x 2n operator with ``J B J = -B``.
        gauge_seed: if given, the basis of the positive half is rotated by a
            seeded Haar-random n x n unitary. The spectrum of xi does not
            depend on this choice.

    Raises:
        NotAntisymmetric: ``J B J + B`` exceeds tolerance.
        OddKernel: the numerical kernel has odd dimension.
    """
    M = B.matrix if isinstance(B, BlockOperator) else np.asarray(B, dtype=complex)
    n2 = M.shape[0]
    n = n2 // 2
    scale = max(1.0, opnorm(M))
    anti = np.max(np.abs(swap_conjugate(M) + M), initial=0.0)
    if anti > BLOCK_TOL * scale:
        raise NotAntisymmetric(f"J B J + B defect {anti:.3e}")

    w, E = np.linalg.eigh(0.5 * (M + M.conj().T))
    thresh = KERNEL_TOL * float(np.max(np.abs(w), initial=0.0))
    in_kernel = np.abs(w) <= thresh
    kdim = int(np.count_nonzero(in_kernel))
    if kdim % 2:
        raise OddKernel(f"kernel of B has odd dimension {kdim}")

    pos = np.flatnonzero(w > thresh)[::-1]
    cols = [_fix_phase(E[:, i]) for i in pos]
    if kdim:
        Q = E[:, in_kernel]
        Mk = Q.conj().T @ _swap(n) @ Q.conj()
        T = takagi_factorize(0.5 * (Mk + Mk.T), tol=1e-8).unitary
        u = Q @ T
        for j in range(kdim // 2):
            cols.append((u[:, 2 * j + 1] + 1j * u[:, 2 * j]) / np.sqrt(2.0))
    if len(cols) != n:
        raise OddKernel(f"positive subspace plus half-kernel has dimension {len(cols)} != {n}")
    Wc = np.column_stack(cols)
    if gauge_seed is not None:
        Wc = Wc @ haar_unitary(n, gauge_seed)

    U_adj = np.hstack([Wc, _jvec(Wc)])
    U = U_adj.conj().T
    D = U @ M @ U_adj
    xi = D[:n, :n]
    skew = np.max(np.abs(xi - xi.conj().T), initial=0.0)
    if skew > 1e-10 * max(1.0, opnorm(xi)):
        raise NotHermitian(f"extracted xi has anti-Hermitian part {skew:.3e}")
    off = max(opnorm(D[:n, n:]), opnorm(D[n:, :n])) / scale
    return FermionicDiagonalization(
        unitary=U,
        xi=HermitianMatrix.symmetrized(xi),
        kernel_dim=kdim,
        offdiag_residual=off,
    )


def bosonic_diagonalize(
    p: Problem, tol: float = 1e-9, gauge_seed: Optional[int] = None
) -> DiagonalizationResult:
    """Diagonalize A by V = U |B|^{1/2} A^{-1/2} and certify the result.

    Raises:
        GapViolation: ``||G|| >= 1``.
    """
    gp = gram_pairing(p)
    if gp.norm >= 1.0:
        raise GapViolation(f"||G|| = {gp.norm:.12g} >= 1")
    if gp.norm > 0.99:
        log.warning("near-critical instance ||G|| = %.6g; delta = %.3e", gp.norm,
                    (1 - gp.norm) / (1 + gp.norm))
    n = p.dim
    A = assemble_block_hamiltonian(p)
    B = signed_block(A)
    fd = fermionic_block_diagonalize(B, gauge_seed=gauge_seed)

    abs_b = hermitian_function(B.matrix, "abs")
    root_abs_b = hermitian_function(abs_b, "sqrt").entries
    a_inv_half = hermitian_function(A.matrix, "inv_sqrt").entries
    W = fd.unitary @ root_abs_b @ a_inv_half
    bmap = BogoliubovMap(U=W[:n, :n], V=W[n:, :n])

    h_half = hermitian_function(p.h, "sqrt").entries
    X, Y = bmap.X, bmap.Y
    e0 = float(np.real(np.trace(h_half @ X @ h_half)) + np.real(np.trace(p.K.entries.conj() @ Y)))

    r = DiagonalizationResult(
        map=bmap,
        xi=fd.xi,
        delta=(1.0 - gp.norm) / (1.0 + gp.norm),
        ground_energy=e0,
        g_norm=gp.norm,
        g_hs=gp.hs_norm,
        block_A=A,
        block_B=B,
        unitary=fd.unitary,
    )
    return dataclasses.replace(r, certificates=certify(p, r, tol=tol))


def certificate_bounds(p: Problem, r: DiagonalizationResult, tol: float = 1e-9) -> BoundsReport:
    g = r.g_norm
    v_op = opnorm(r.full_map)
    v_opnorm_bound = ((1.0 + g) / (1.0 - g)) ** 0.25
    v_hs = float(np.linalg.norm(r.map.V, "fro"))
    v_hs_bound = 2.0 * r.g_hs / (1.0 - g)

    A = r.block_A.matrix
    abs_b = hermitian_function(r.block_B.matrix, "abs").entries
    sd = np.sqrt(r.delta)
    sandwich = psd_dominates(sd * A, abs_b, tol) and psd_dominates(abs_b, A / sd, tol)

    K = p.K.entries
    hinv = hermitian_function(p.h, "inverse").entries
    khk = K @ hinv @ K.conj()
    pairing = psd_dominates(0.5 * (khk + khk.conj().T), g**2 * p.h.entries.conj(), tol)
    return BoundsReport(
        v_opnorm=v_op,
        v_opnorm_bound=v_opnorm_bound,
        v_opnorm_bound_ok=v_op <= v_opnorm_bound * (1.0 + BOUND_SLACK),
        v_hs=v_hs,
        v_hs_bound=v_hs_bound,
        v_hs_bound_ok=v_hs <= v_hs_bound * (1.0 + BOUND_SLACK) + 1e-15,
        sandwich_ok=sandwich,
        pairing_bound_ok=pairing,
    )


def diag_equation_residuals(p: Problem, r: DiagonalizationResult) -> tuple[float, float, float]:
    """Operator norms of the two linear equations for (X, Y) and of the
    off-diagonal block of ``V A V*`` written in terms of (U, V)."""
    h = p.h.entries
    K = p.K.entries
    U, V = r.map.U, r.map.V
    X, Y = r.map.X, r.map.Y
    line1 = h @ X - X @ h + K.conj() @ Y - Y.conj().T @ K
    line2 = h.conj() @ Y + Y @ h + K @ X + X.conj() @ K + K
    off = (
        U @ h @ V.conj().T
        + V.conj() @ h.conj() @ U.T
        + U @ K.conj() @ U.T
        + V.conj() @ K @ V.conj().T
    )
    return opnorm(line1), opnorm(line2), opnorm(off)


def quasi_free_structure(r: DiagonalizationResult) -> QuasiFreeStructure:
    """Joint eigenbasis u_n: ``X u_n = lam_n u_n`` and
    ``conj(Y) conj(u_n) = sqrt(lam_n + lam_n^2) u_n``."""
    X, Y = r.map.X, r.map.Y
    X = 0.5 * (X + X.conj().T)
    tk = takagi_factorize(0.5 * (Y + Y.T).conj(), tol=1e-8)
    u = tk.unitary
    lam = np.clip(np.real(np.einsum("in,ij,jn->n", u.conj(), X, u)), 0.0, None)
    x_def = np.linalg.norm(X @ u - u * lam, axis=0)
    y_def = np.linalg.norm(Y.conj() @ u.conj() - u * np.sqrt(lam + lam**2), axis=0)
    residual = float(max(np.max(x_def, initial=0.0), np.max(y_def, initial=0.0)))
    ident = opnorm(Y.conj().T @ Y - X - X @ X)
    return QuasiFreeStructure(basis=u, lambdas=lam, residual=residual, identity_residual=ident)


def ground_energy_bound_check(p: Problem, r: DiagonalizationResult) -> bool:
    """E0 >= -||K h^{-1/2}||_HS^2 / 2 and E0 >= -Tr(K h^{-1} conj K) / 2."""
    h_inv_half = hermitian_function(p.h, "inv_sqrt").entries
    hs2 = float(np.linalg.norm(p.K.entries @ h_inv_half, "fro") ** 2)
    tr = pairing_trace(p)
    e0 = r.ground_energy
    return e0 >= -0.5 * hs2 - ENERGY_SLACK and e0 >= -0.5 * tr - ENERGY_SLACK


def certify(p: Problem, r: DiagonalizationResult, tol: float = 1e-9) -> CertificateBundle:
    n = p.dim
    scale = max(1.0, opnorm(p.h.entries) + opnorm(p.K.entries))

    bounds = certificate_bounds(p, r, tol)
    bog = validate_bogoliubov(r.map, tol)

    W = r.full_map
    VAV = W @ r.block_A.matrix @ W.conj().T
    a_scale = max(1.0, opnorm(r.block_A.matrix))
    off = max(opnorm(VAV[:n, n:]), opnorm(VAV[n:, :n])) / a_scale
    xi = r.xi.entries
    diag = max(opnorm(VAV[:n, :n] - xi), opnorm(VAV[n:, n:] - xi.conj())) / a_scale

    eqs = diag_equation_residuals(p, r)
    qf = quasi_free_structure(r)
    xi_min = float(np.linalg.eigvalsh(xi)[0])
    lower = -0.5 * pairing_trace(p)

    return CertificateBundle(
        g_norm=r.g_norm,
        g_hs=r.g_hs,
        v_opnorm=bounds.v_opnorm,
        v_opnorm_bound=bounds.v_opnorm_bound,
        v_opnorm_bound_ok=bounds.v_opnorm_bound_ok,
        v_hs=bounds.v_hs,
        v_hs_bound=bounds.v_hs_bound,
        v_hs_bound_ok=bounds.v_hs_bound_ok,
        sandwich_ok=bounds.sandwich_ok,
        pairing_bound_ok=bounds.pairing_bound_ok,
        bogoliubov_residuals=bog.relation_residuals,
        bogoliubov_ok=bog.passed and off <= tol and diag <= tol,
        offdiag_residual=off,
        diagonal_residual=diag,
        diag_eq_residuals=eqs,
        diag_eq_ok=max(eqs) <= 1e-8 * scale,
        joint_structure_residual=qf.residual,
        joint_identity_residual=qf.identity_residual,
        joint_structure_ok=qf.residual <= 1e-8 and qf.identity_residual <= tol,
        xi_min=xi_min,
        xi_positive=xi_min > 0.0,
        lower_bound=lower,
        lower_bound_ok=ground_energy_bound_check(p, r),
    )
