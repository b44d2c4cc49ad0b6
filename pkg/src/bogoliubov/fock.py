"""Brute-force oracle on a truncated bosonic Fock space.

The basis keeps every occupation vector with total particle number at most
``n_max``. Ladder operators are the usual occupation-number matrices with the
raising operator dropped at the top shell, so every product of two ladder
operators is the exact compression of the untruncated product. In particular
the quadratic Hamiltonian built here is the compression of the true one and
its eigenvalues are variational upper bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .diagonalizer import DiagonalizationResult
from .errors import DimensionMismatch, GapViolation, NotNormalized, SizeOverflow, TruncationUnreliable
from .linalg import ComplexSymmetricMatrix, HermitianMatrix, hermitian_function, opnorm
from .nambu import Problem, gram_pairing, pairing_trace

DEFAULT_CAP = 200_000
DENSE_LIMIT = 4000
MAX_TAIL = 1e-6


@dataclass(frozen=True, eq=False)
class FockBasis:
    modes: int
    n_max: int
    states: tuple
    shells: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, occ) -> int:
        return self._lookup[tuple(occ)]

    def __post_init__(self):
        object.__setattr__(self, "_lookup", {s: i for i, s in enumerate(self.states)})


@dataclass(frozen=True, eq=False)
class FockOperator:
    basis: FockBasis
    matrix: sp.csr_matrix
    hermitian: bool = True

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True, eq=False)
class DensityMatrixPair:
    gamma: HermitianMatrix
    alpha: ComplexSymmetricMatrix

    def block_matrix(self) -> np.ndarray:
        """[[gamma, alpha^*], [alpha, 1 + conj(gamma)]], positive for any state."""
        g, a = self.gamma.entries, self.alpha.entries
        n = g.shape[0]
        return np.block([[g, a.conj().T], [a, np.eye(n) + g.conj()]])

    def invariants_ok(self, tol: float = 1e-9) -> bool:
        g, a = self.gamma.entries, self.alpha.entries
        gnorm = opnorm(g)
        scale = max(1.0, gnorm * (1.0 + gnorm))
        lhs = g * (1.0 + gnorm) - a.conj().T @ a
        return (
            np.linalg.eigvalsh(g)[0] >= -tol * max(1.0, gnorm)
            and np.linalg.eigvalsh(0.5 * (lhs + lhs.conj().T))[0] >= -tol * scale
        )


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    levels: np.ndarray
    reference: np.ndarray
    level_errors: np.ndarray
    gamma_error: float
    alpha_error: float
    tail_weight: float
    ground_pair: DensityMatrixPair


def build_basis(modes: int, n_max: int, cap: int = DEFAULT_CAP) -> FockBasis:
    """States with sum(n_i) <= n_max, graded by N then lexicographic."""
    if modes < 1 or n_max < 0:
        raise ValueError(f"need modes >= 1 and n_max >= 0, got ({modes}, {n_max})")
    dim = comb(modes + n_max, modes)
    if dim > cap:
        raise SizeOverflow(f"Fock dimension {dim} exceeds cap {cap}")
    states = []
    shells = []
    for N in range(n_max + 1):
        shell = []
        # stars and bars: bar positions among N + modes - 1 slots
        for bars in itertools.combinations(range(N + modes - 1), modes - 1):
            edges = (-1,) + bars + (N + modes - 1,)
            shell.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(modes)))
        shell.sort()
        states.extend(shell)
        shells.extend([N] * len(shell))
    return FockBasis(modes=modes, n_max=n_max, states=tuple(states), shells=np.array(shells))


def ladder_matrices(b: FockBasis) -> list:
    """[(a_i, a_i^dagger)] as sparse matrices."""
    out = []
    D = b.dim
    for i in range(b.modes):
        rows, cols, vals = [], [], []
        for col, occ in enumerate(b.states):
            if occ[i] == 0:
                continue
            lowered = list(occ)
            lowered[i] -= 1
            rows.append(b.index(lowered))
            cols.append(col)
            vals.append(np.sqrt(occ[i]))
        a = sp.csr_matrix((vals, (rows, cols)), shape=(D, D), dtype=complex)
        out.append((a, a.T.tocsr()))
    return out


def build_quadratic_hamiltonian(b: FockBasis, p: Problem, ladders=None) -> FockOperator:
    """H = sum h_mn a_m^+ a_n + 1/2 sum (K_mn a_m a_n + conj(K_mn) a_m^+ a_n^+)."""
    if p.dim != b.modes:
        raise DimensionMismatch(f"problem has {p.dim} modes, basis has {b.modes}")
    ops = ladders if ladders is not None else ladder_matrices(b)
    h = p.h.entries
    K = p.K.entries
    H = sp.csr_matrix((b.dim, b.dim), dtype=complex)
    for m, (am, adm) in enumerate(ops):
        for n, (an, adn) in enumerate(ops):
            if h[m, n] != 0:
                H = H + h[m, n] * (adm @ an)
            if K[m, n] != 0:
                H = H + 0.5 * (K[m, n] * (am @ an) + np.conj(K[m, n]) * (adm @ adn))
    H = H.tocsr()
    defect = abs(H - H.conj().T).max() if H.nnz else 0.0
    if defect > 1e-12 * max(1.0, abs(H).max() if H.nnz else 0.0):
        raise ValueError(f"assembled Hamiltonian not Hermitian: defect {defect:.3e}")
    return FockOperator(basis=b, matrix=H, hermitian=True)


def second_quantize(b: FockBasis, one_body, ladders=None) -> FockOperator:
    """dGamma of a one-body Hermitian matrix."""
    hm = HermitianMatrix(one_body)
    zero = ComplexSymmetricMatrix(np.zeros_like(hm.entries))
    return build_quadratic_hamiltonian(b, Problem(h=hm, K=zero, h_min=0.0), ladders)


def number_operator(b: FockBasis) -> FockOperator:
    return FockOperator(b, sp.diags(b.shells.astype(complex)).tocsr())


def lowest_eigenpairs(op: FockOperator, levels: int):
    """Lowest ``levels`` eigenpairs with residual <= 1e-10 ||H||."""
    H = op.matrix
    D = H.shape[0]
    k = min(levels, D)
    if D <= DENSE_LIMIT or k >= D - 1:
        w, v = np.linalg.eigh(H.toarray())
        w, v = w[:k], v[:, :k]
    else:
        w, v = eigsh(H, k=k, which="SA", tol=1e-14)
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    hnorm = max(1.0, float(abs(H).max()) if H.nnz else 0.0)
    resid = np.linalg.norm(H @ v - v * w, axis=0)
    if np.any(resid > 1e-10 * hnorm * np.sqrt(D)):
        raise RuntimeError(f"eigensolver residual {resid.max():.3e} too large")
    return w, v


def one_particle_density_matrices(b: FockBasis, psi, ladders=None) -> DensityMatrixPair:
    """gamma_mn = <a_n^+ a_m>, alpha_mn = <a_m^+ a_n^+>."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != b.dim:
        raise DimensionMismatch(f"state has length {psi.shape[0]}, basis has {b.dim}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise NotNormalized(f"||psi|| = {np.linalg.norm(psi):.15g}")
    ops = ladders if ladders is not None else ladder_matrices(b)
    low = np.column_stack([a @ psi for a, _ in ops])
    high = np.column_stack([ad @ psi for _, ad in ops])
    gamma = low.T @ low.conj()  # gamma_mn = <a_n psi, a_m psi>
    alpha = low.conj().T @ high  # alpha_mn = <a_m psi, a_n^+ psi>
    return DensityMatrixPair(
        gamma=HermitianMatrix.symmetrized(gamma),
        alpha=ComplexSymmetricMatrix.symmetrized(alpha),
    )


def quadratic_form_energy(pair: DensityMatrixPair, p: Problem) -> float:
    """Tr(h^{1/2} gamma h^{1/2}) + Re Tr(k^* alpha)."""
    if pair.gamma.dim != p.dim:
        raise DimensionMismatch(f"pair has {pair.gamma.dim} modes, problem has {p.dim}")
    r = hermitian_function(p.h, "sqrt").entries
    kinetic = np.trace(r @ pair.gamma.entries @ r).real
    pairing = np.trace(p.K.entries.conj() @ pair.alpha.entries).real
    return float(kinetic + pairing)


def excitation_levels(xi_spectrum, e0: float, count: int) -> np.ndarray:
    """The ``count`` smallest values of e0 + sum_i m_i xi_i over m_i >= 0."""
    xs = np.sort(np.asarray(xi_spectrum, dtype=float))
    energies = [0.0]
    # the count lowest levels use at most count - 1 quanta in total
    for N in range(1, count):
        for combo in itertools.combinations_with_replacement(range(xs.size), N):
            energies.append(float(xs[list(combo)].sum()))
    return e0 + np.sort(energies)[:count]


def verify_spectrum(
    p: Problem,
    r: DiagonalizationResult,
    n_max: int,
    levels: int,
    max_tail: float = MAX_TAIL,
    cap: int = DEFAULT_CAP,
) -> SpectrumReport:
    """Compare the truncated-Fock spectrum and ground state with (xi, E0, V*V, U^T V).

    Raises:
        GapViolation: ``||G|| >= 1``.
        TruncationUnreliable: ground-state weight on the top two shells exceeds
            ``max_tail``. The report is attached as ``exc.report``.
    """
    if gram_pairing(p).norm >= 1.0:
        raise GapViolation("verify_spectrum needs ||G|| < 1")
    if r.map.n != p.dim:
        raise DimensionMismatch("result and problem disagree on the number of modes")
    b = build_basis(p.dim, n_max, cap=cap)
    ops = ladder_matrices(b)
    H = build_quadratic_hamiltonian(b, p, ops)
    w, v = lowest_eigenpairs(H, levels)
    ref = excitation_levels(r.xi_spectrum, r.ground_energy, len(w))

    psi0 = v[:, 0] / np.linalg.norm(v[:, 0])
    pair = one_particle_density_matrices(b, psi0, ops)
    tail = float(np.sum(np.abs(psi0[b.shells >= n_max - 1]) ** 2))
    report = SpectrumReport(
        levels=w,
        reference=ref,
        level_errors=np.abs(w - ref),
        gamma_error=opnorm(pair.gamma.entries - r.map.X),
        alpha_error=opnorm(pair.alpha.entries - r.map.Y),
        tail_weight=tail,
        ground_pair=pair,
    )
    if tail > max_tail:
        exc = TruncationUnreliable(f"tail weight {tail:.3e} exceeds {max_tail:.1e} at n_max = {n_max}")
        exc.report = report
        raise exc
    return report


def lower_bounds(p: Problem) -> tuple[float, float]:
    """The two ground-energy lower bounds ``(-T/2, -(sqrt d / 2) T)``.

    Here ``T = Tr(k h^{-1} k^*)`` and ``d = ||G||^2``. The first always holds.
    The second is strictly stronger whenever ``||G|| < 1`` and fails in general:
    one mode with h = 1, k = 0.3 has E0 = -0.02303 below -0.0135.
    """
    tr = pairing_trace(p)
    sd = gram_pairing(p).norm
    return -0.5 * tr, -0.5 * sd * tr


def lower_bound_check(p: Problem, e0: float, slack: float = 1e-10) -> bool:
    """True iff ``e0`` respects both bounds of :func:`lower_bounds` up to ``slack``."""
    half_trace, refined = lower_bounds(p)
    return bool(e0 >= half_trace - slack and e0 >= refined - slack)


def lower_bound_sandwich_check(
    p: Problem, n_max: int, tol: float = 1e-9, cap: int = DEFAULT_CAP
) -> dict:
    """Operator sandwich on the truncated space with d = ||G||^2:

        (1 + sqrt d) dGamma(h) + c >= H >= (1 - sqrt d) dGamma(h) - c.

    Two constants are tested side by side: ``c_stated = (sqrt d / 2) T`` and
    ``c_proof = T / (2 sqrt d)`` with ``T = Tr(k h^{-1} k^*)``. The second is what
    a Cauchy-Schwarz estimate of the pairing term with weight sqrt d yields; the
    first is smaller and fails already for a single mode (h = 1, k = 0.6 gives
    inf(H - 0.4 N) = -0.3 < -0.108). Products of truncated ladder operators are
    exact compressions, so a negative minimum eigenvalue beyond roundoff is a
    genuine violation.

    Returns:
        Dict with ``{lower,upper}_min_eig_{stated,proof}`` and matching ``*_ok``
        flags. For ``K = 0`` both constants are taken as 0.
    """
    b = build_basis(p.dim, n_max, cap=cap)
    ops = ladder_matrices(b)
    H = build_quadratic_hamiltonian(b, p, ops).dense()
    T = second_quantize(b, p.h.entries, ops).dense()
    sd = gram_pairing(p).norm
    tr = pairing_trace(p)
    consts = {
        "stated": 0.5 * sd * tr,
        "proof": tr / (2.0 * sd) if sd > 0 else 0.0,
    }
    eye = np.eye(b.dim)
    scale = max(1.0, float(np.abs(H).max()))
    out = {"sqrt_delta": float(sd), "trace": float(tr)}
    for name, c in consts.items():
        lower = float(np.linalg.eigvalsh(H - (1.0 - sd) * T + c * eye)[0])
        upper = float(np.linalg.eigvalsh((1.0 + sd) * T + c * eye - H)[0])
        out[f"constant_{name}"] = float(c)
        out[f"lower_min_eig_{name}"] = lower
        out[f"upper_min_eig_{name}"] = upper
        out[f"lower_ok_{name}"] = bool(lower >= -tol * scale)
        out[f"upper_ok_{name}"] = bool(upper >= -tol * scale)
    return out


def ground_state(p: Problem, n_max: int, cap: Optional[int] = None):
    """(E, psi, basis) for the truncated Hamiltonian."""
    b = build_basis(p.dim, n_max, cap=cap or DEFAULT_CAP)
    w, v = lowest_eigenpairs(build_quadratic_hamiltonian(b, p), 1)
    return float(w[0]), v[:, 0], b
