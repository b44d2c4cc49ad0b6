"""Dense complex operator algebra.

Spectral functions of Hermitian matrices, the Takagi factorization of complex
symmetric matrices (equivalently, an eigenbasis of a self-adjoint anti-linear
map ``f -> M conj(f)``), Loewner-order checks and the three norms used by the
certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    NonSquareTrace,
    NotHermitian,
    NotPSD,
    NotSymmetric,
    Singular,
)

CONSTRUCTION_TOL = 1e-12
DEFAULT_CLIP = 1e-12
CLUSTER_TOL = 1e-12

_FUNCTIONS = ("sqrt", "inv_sqrt", "abs", "inverse")


def opnorm(M) -> float:
    """Largest singular value (0 for empty matrices)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def _square(M, name="matrix") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {M.shape}")
    return M


def _frozen(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=complex, copy=True)
    M.setflags(write=False)
    return M


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    entries: np.ndarray

    def __post_init__(self):
        M = _square(self.entries, "HermitianMatrix")
        scale = max(1.0, opnorm(M))
        defect = np.max(np.abs(M - M.conj().T), initial=0.0)
        if defect > CONSTRUCTION_TOL * scale:
            raise NotHermitian(f"max|M - M^H| = {defect:.3e} exceeds tolerance")
        object.__setattr__(self, "entries", _frozen(M))

    @classmethod
    def symmetrized(cls, M) -> "HermitianMatrix":
        """Wrap a computed matrix after discarding its anti-Hermitian roundoff."""
        M = _square(M)
        return cls(0.5 * (M + M.conj().T))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class ComplexSymmetricMatrix:
    entries: np.ndarray

    def __post_init__(self):
        M = _square(self.entries, "ComplexSymmetricMatrix")
        scale = max(1.0, opnorm(M))
        defect = np.max(np.abs(M - M.T), initial=0.0)
        if defect > CONSTRUCTION_TOL * scale:
            raise NotSymmetric(f"max|M - M^T| = {defect:.3e} exceeds tolerance")
        object.__setattr__(self, "entries", _frozen(M))

    @classmethod
    def symmetrized(cls, M) -> "ComplexSymmetricMatrix":
        M = _square(M)
        return cls(0.5 * (M + M.T))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


@dataclass(frozen=True, eq=False)
class TakagiFactorization:
    """``M = unitary @ diag(values) @ unitary.T`` with values descending."""

    unitary: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.unitary * self.values) @ self.unitary.T


@dataclass(frozen=True)
class Norms:
    operator: float
    hilbert_schmidt: float
    trace: Optional[complex] = None


def _hermitian_entries(M) -> np.ndarray:
    if isinstance(M, HermitianMatrix):
        return M.entries
    return HermitianMatrix(M).entries


def _cluster(w: np.ndarray, scale: float) -> np.ndarray:
    # eigh returns ascending eigenvalues; merge runs closer than the cluster tolerance
    w = w.copy()
    if w.size == 0:
        return w
    gap = CLUSTER_TOL * scale
    start = 0
    for i in range(1, w.size + 1):
        if i == w.size or w[i] - w[i - 1] > gap:
            w[start:i] = w[start:i].mean()
            start = i
    return w


def hermitian_function(M, f: str, clip: float = DEFAULT_CLIP) -> HermitianMatrix:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Args:
        M: Hermitian matrix (array-like or :class:`HermitianMatrix`).
        f: one of ``"sqrt"``, ``"inv_sqrt"``, ``"abs"``, ``"inverse"``.
        clip: relative threshold. Eigenvalues in ``[-clip*||M||, 0)`` are
            treated as roundoff zeros by ``sqrt``; ``inv_sqrt`` and ``inverse``
            reject any eigenvalue with ``|lambda| <= clip*||M||``.

    Raises:
        NotPSD: an eigenvalue lies below ``-clip*||M||`` and ``f`` needs
            positivity (every ``f`` except ``abs``).
        Singular: ``f`` inverts and an eigenvalue is within the clip band of 0.
    """
    if f not in _FUNCTIONS:
        raise ValueError(f"unknown matrix function {f!r}; expected one of {_FUNCTIONS}")
    A = _hermitian_entries(M)
    w, Q = np.linalg.eigh(A)
    scale = float(np.max(np.abs(w), initial=0.0))
    w = _cluster(w, scale)
    band = clip * scale

    if f != "abs" and w.size and w[0] < -band:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -clip*||M|| = {-band:.3e}")
    if f in ("inv_sqrt", "inverse") and np.any(np.abs(w) <= band):
        raise Singular(f"eigenvalue within {band:.3e} of zero")

    if f == "sqrt":
        fw = np.sqrt(np.clip(w, 0.0, None))
    elif f == "abs":
        fw = np.abs(w)
    elif f == "inv_sqrt":
        fw = 1.0 / np.sqrt(w)
    else:
        fw = 1.0 / w
    return HermitianMatrix.symmetrized((Q * fw) @ Q.conj().T)


def _takagi_core(M: np.ndarray, thresh: float) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization through the real symmetric embedding.

    For ``u = a + i b`` the condition ``M conj(u) = s u`` is the real eigenproblem
    ``[[Re M, Im M], [Im M, -Re M]] (a; b) = s (a; b)``. Its spectrum is symmetric
    (``(a; b) -> (-b; a)`` flips the sign), so the eigenvectors with clearly
    positive eigenvalue give orthonormal Takagi vectors even inside degenerate
    clusters. Values below ``thresh`` (relative) are handled by recursing on the
    compression of ``M`` to the orthogonal complement.
    """
    n = M.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex), np.zeros(0)
    scale = opnorm(M)
    if scale == 0.0:
        return np.eye(n, dtype=complex), np.zeros(n)

    Ms = M / scale
    Re, Im = Ms.real, Ms.imag
    R = np.block([[Re, Im], [Im, -Re]])
    R = 0.5 * (R + R.T)
    s, E = np.linalg.eigh(R)
    keep = s > thresh
    big = E[:n, keep] + 1j * E[n:, keep]
    big_vals = s[keep] * scale
    m = big.shape[1]
    if m == n:
        return big, big_vals

    # orthonormal basis of the complement of span(big)
    q, _ = np.linalg.qr(np.hstack([big, np.eye(n, dtype=complex)]))
    P = q[:, m:n]
    small = P.conj().T @ M @ P.conj()
    small = 0.5 * (small + small.T)
    Us, vs = _takagi_core(small, thresh)
    return np.hstack([big, P @ Us]), np.concatenate([big_vals, vs])


def takagi_factorize(M, tol: float = CONSTRUCTION_TOL) -> TakagiFactorization:
    """Factor a complex symmetric matrix as ``U diag(values) U^T``.

    The columns of ``U`` are an orthonormal eigenbasis of the anti-linear map
    ``f -> M conj(f)`` with non-negative eigenvalues ``values``.

    Raises:
        NotSymmetric: ``max|M - M^T| > tol * max(1, ||M||)``.
    """
    if isinstance(M, ComplexSymmetricMatrix):
        A = M.entries
    else:
        A = _square(M)
        defect = np.max(np.abs(A - A.T), initial=0.0)
        if defect > tol * max(1.0, opnorm(A)):
            raise NotSymmetric(f"max|M - M^T| = {defect:.3e} exceeds tolerance")
        A = 0.5 * (A + A.T)
    U, vals = _takagi_core(np.asarray(A, dtype=complex), thresh=1e-8)
    order = np.argsort(-vals, kind="stable")
    U = U[:, order]
    vals = np.clip(vals[order], 0.0, None)
    return TakagiFactorization(unitary=_frozen(U), values=vals)


def psd_dominates(A, B, tol: float = 1e-10) -> bool:
    """True iff ``A <= B`` in the Loewner order, up to ``tol*max(1, ||A||+||B||)``."""
    A = _hermitian_entries(A)
    B = _hermitian_entries(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} differ")
    D = B - A
    lam_min = float(np.linalg.eigvalsh(0.5 * (D + D.conj().T))[0]) if D.size else 0.0
    return lam_min >= -tol * max(1.0, opnorm(A) + opnorm(B))


def min_eigenvalue(M) -> float:
    M = np.asarray(M, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])


def norms(M, trace: bool = True) -> Norms:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    tr = None
    if trace:
        if M.shape[0] != M.shape[1]:
            raise NonSquareTrace(f"trace of non-square {M.shape} matrix")
        tr = complex(np.trace(M))
    return Norms(
        operator=opnorm(M),
        hilbert_schmidt=float(np.linalg.norm(M, "fro")),
        trace=tr,
    )
