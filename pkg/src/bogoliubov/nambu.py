"""The doubled one-body space H + H*.

Basis convention: H* is identified with H through entrywise complex conjugation
in a fixed orthonormal basis. The pairing operator k: H -> H* then becomes a
complex symmetric matrix ``K``, the anti-unitary swap on the doubled space acts
as ``(f, g) -> (conj g, conj f)``, and

    A = [[h, conj K], [K, conj h]],   V = [[U, conj V], [V, conj U]].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NotPositive, NotSymmetric, NotSymmetricPairing
from .linalg import (
    ComplexSymmetricMatrix,
    HermitianMatrix,
    hermitian_function,
    opnorm,
)

log = logging.getLogger(__name__)

BLOCK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Problem:
    """A validated pair (h, K): h > 0 Hermitian, K complex symmetric."""

    h: HermitianMatrix
    K: ComplexSymmetricMatrix
    h_min: float
    label: Optional[str] = None

    @property
    def dim(self) -> int:
        return self.h.dim


@dataclass(frozen=True, eq=False)
class GramPairing:
    M_G: ComplexSymmetricMatrix
    norm: float
    hs_norm: float


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """2n x 2n operator on H + H*, stored as a full matrix.

    ``flavor`` is ``"symmetric"`` when it commutes with the swap-conjugation
    (like A) and ``"antisymmetric"`` when it anticommutes (like B).
    """

    matrix: np.ndarray
    flavor: str = "symmetric"

    def __post_init__(self):
        M = np.array(self.matrix, dtype=complex, copy=True)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise DimensionMismatch(f"block operator needs even square shape, got {M.shape}")
        if self.flavor not in ("symmetric", "antisymmetric"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        scale = max(1.0, opnorm(M))
        herm = np.max(np.abs(M - M.conj().T), initial=0.0)
        if herm > BLOCK_TOL * scale:
            raise NotSymmetric(f"block operator not self-adjoint: defect {herm:.3e}")
        sign = 1.0 if self.flavor == "symmetric" else -1.0
        jdefect = np.max(np.abs(swap_conjugate(M) - sign * M), initial=0.0)
        if jdefect > BLOCK_TOL * scale:
            raise NotSymmetric(f"swap-conjugation defect {jdefect:.3e} for flavor {self.flavor}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def blocks(self):
        n = self.n
        M = self.matrix
        return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]


@dataclass(frozen=True, eq=False)
class BogoliubovMap:
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        U = np.array(self.U, dtype=complex, copy=True)
        V = np.array(self.V, dtype=complex, copy=True)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape != V.shape:
            raise DimensionMismatch(f"U {U.shape} and V {V.shape} must be equal square blocks")
        U.setflags(write=False)
        V.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)

    @property
    def n(self) -> int:
        return self.U.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        U, V = self.U, self.V
        return np.block([[U, V.conj()], [V, U.conj()]])

    @property
    def X(self) -> np.ndarray:
        """V*V, the one-particle density matrix of the quasi-free ground state."""
        return self.V.conj().T @ self.V

    @property
    def Y(self) -> np.ndarray:
        """J U* J* V, realized as the symmetric matrix U^T V."""
        return self.U.T @ self.V


@dataclass(frozen=True)
class BogoliubovCertificate:
    relation_residuals: dict = field(default_factory=dict)
    passed: bool = False


@dataclass(frozen=True)
class ShaleReport:
    v_hs: float


def symplectic_sign(n: int) -> np.ndarray:
    """S = diag(1_n, -1_n)."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)


def swap_conjugate(M: np.ndarray) -> np.ndarray:
    """The linear operator J M J for the anti-unitary swap J(f, g) = (conj g, conj f)."""
    n = M.shape[0] // 2
    C = np.conj(M)
    return np.block([[C[n:, n:], C[n:, :n]], [C[:n, n:], C[:n, :n]]])


def validate_problem(h, K, label: Optional[str] = None) -> Problem:
    h = np.asarray(h, dtype=complex)
    K = np.asarray(K, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"h must be square, got {h.shape}")
    if K.shape != h.shape:
        raise DimensionMismatch(f"K has shape {K.shape}, h has shape {h.shape}")
    hm = HermitianMatrix(h)
    try:
        Km = ComplexSymmetricMatrix(K)
    except NotSymmetric as exc:
        raise NotSymmetricPairing(f"pairing matrix K is not symmetric: {exc}") from None
    h_min = float(np.linalg.eigvalsh(hm.entries)[0])
    if h_min <= 0.0:
        raise NotPositive(f"h has non-positive eigenvalue {h_min:.3e}")
    p = Problem(h=hm, K=Km, h_min=h_min, label=label)
    g = gram_pairing(p).norm
    if g >= 1.0:
        log.warning("accepted problem with ||G|| = %.6g >= 1; it cannot be diagonalized", g)
    return p


def gram_pairing(p: Problem) -> GramPairing:
    """Matrix of the anti-linear G = h^{-1/2} J* k h^{-1/2}, i.e. f -> M_G conj(f)."""
    r = hermitian_function(p.h, "inv_sqrt").entries
    K = p.K.entries
    M_G = r @ K.conj() @ r.conj()
    defect = np.max(np.abs(M_G - M_G.T), initial=0.0)
    if defect > BLOCK_TOL * max(1.0, opnorm(M_G)):
        raise NotSymmetric(f"M_G symmetry defect {defect:.3e}")
    M_G = ComplexSymmetricMatrix.symmetrized(M_G)
    return GramPairing(
        M_G=M_G,
        norm=opnorm(M_G.entries),
        hs_norm=float(np.linalg.norm(M_G.entries, "fro")),
    )


def assemble_block_hamiltonian(p: Problem) -> BlockOperator:
    h = p.h.entries
    K = p.K.entries
    return BlockOperator(np.block([[h, K.conj()], [K, h.conj()]]), flavor="symmetric")


def pairing_trace(p: Problem) -> float:
    """Tr(k h^{-1} k*) = ||K h^{-1/2}||_HS^2."""
    K = p.K.entries
    hinv = hermitian_function(p.h, "inverse").entries
    return float(np.real(np.trace(K @ hinv @ K.conj())))


def kh_inv_norms(p: Problem) -> tuple[float, float]:
    """(||K h^{-1}||_op, ||K h^{-1}||_HS)."""
    M = p.K.entries @ hermitian_function(p.h, "inverse").entries
    return opnorm(M), float(np.linalg.norm(M, "fro"))


def validate_bogoliubov(m: BogoliubovMap, tol: float = 1e-9) -> BogoliubovCertificate:
    U, V = m.U, m.V
    n = m.n
    eye = np.eye(n)
    S = symplectic_sign(n)
    W = m.matrix
    res = {
        "UhU": opnorm(U.conj().T @ U - eye - V.conj().T @ V),
        "UUh": opnorm(U @ U.conj().T - eye - V.conj() @ V.T),
        "symmetry": opnorm(V.conj().T @ U.conj() - U.conj().T @ V.conj()),
        "VhSV": opnorm(W.conj().T @ S @ W - S),
        "VSVh": opnorm(W @ S @ W.conj().T - S),
    }
    return BogoliubovCertificate(
        relation_residuals=res, passed=all(r <= tol for r in res.values())
    )


def shale_check(m: BogoliubovMap) -> ShaleReport:
    return ShaleReport(v_hs=float(np.linalg.norm(m.V, "fro")))
