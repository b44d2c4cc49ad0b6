"""Deterministic instance generators.

Every generator is a pure function of its arguments. ``gnorm`` fixes ||G||
exactly; since G is linear in K this is a single rescaling.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParams
from .linalg import ComplexSymmetricMatrix, HermitianMatrix
from .nambu import Problem, gram_pairing, validate_problem

KINDS = ("commutative", "random", "laplacian")


def _haar(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def _rescale(h: np.ndarray, K0: np.ndarray, gnorm: float, label: str) -> Problem:
    raw = Problem(h=HermitianMatrix(h), K=ComplexSymmetricMatrix(K0), h_min=0.0)
    g0 = gram_pairing(raw).norm
    if g0 == 0.0:
        raise InvalidParams("seed produced a vanishing pairing matrix")
    p = validate_problem(h, K0 * (gnorm / g0), label=label)
    if abs(gram_pairing(p).norm - gnorm) > 1e-12:
        raise InvalidParams("rescaling failed to hit the requested ||G||")
    return p


def commutative(modes: int, gnorm: float, seed: int) -> Problem:
    """Diagonal h in [0.5, 2], real signed k with max |k_i|/h_i = gnorm."""
    rng = np.random.default_rng(seed)
    h = rng.uniform(0.5, 2.0, modes)
    g = rng.uniform(0.0, gnorm, modes)
    g[rng.integers(modes)] = gnorm
    sign = rng.choice([-1.0, 1.0], modes)
    return validate_problem(
        np.diag(h), np.diag(sign * g * h), label=f"commutative-{modes}-{gnorm:g}-{seed}"
    )


def random_instance(modes: int, gnorm: float, seed: int, spread: float = 100.0) -> Problem:
    """Haar-rotated h with log-uniform spectrum in [1/sqrt(spread), sqrt(spread)]
    and a Gaussian complex symmetric pairing.

    A wide spectrum of h makes ||K h^{-1}|| exceed ||G|| by up to sqrt(spread),
    which produces instances with ||G|| < 1 < ||K h^{-1}||.
    """
    rng = np.random.default_rng(seed)
    half = 0.5 * np.log(spread)
    e = np.exp(rng.uniform(-half, half, modes))
    Q = _haar(rng, modes)
    h = (Q * e) @ Q.conj().T
    h = 0.5 * (h + h.conj().T)
    Z = rng.standard_normal((modes, modes)) + 1j * rng.standard_normal((modes, modes))
    return _rescale(h, 0.5 * (Z + Z.T), gnorm, f"random-{modes}-{gnorm:g}-{seed}")


def laplacian(modes: int, gnorm: float, seed: int) -> Problem:
    """Dirichlet lattice Laplacian plus a random potential; banded symmetric pairing."""
    rng = np.random.default_rng(seed)
    h = 2.0 * np.eye(modes) - np.eye(modes, k=1) - np.eye(modes, k=-1)
    h = h + np.diag(rng.uniform(0.0, 1.0, modes))
    diag = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    off = rng.standard_normal(modes - 1) + 1j * rng.standard_normal(modes - 1)
    K0 = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    return _rescale(h.astype(complex), K0, gnorm, f"laplacian-{modes}-{gnorm:g}-{seed}")


def generate(kind: str, modes: int, gnorm: float, seed: int) -> Problem:
    if kind not in KINDS:
        raise InvalidParams(f"unknown kind {kind!r}; expected one of {KINDS}")
    if modes < 1:
        raise InvalidParams("modes must be >= 1")
    if not 0.0 < gnorm < 1.0:
        raise InvalidParams(f"gnorm must lie in (0, 1), got {gnorm}")
    if kind == "commutative":
        return commutative(modes, gnorm, seed)
    if kind == "random":
        return random_instance(modes, gnorm, seed)
    return laplacian(modes, gnorm, seed)
