"""Closed-form diagonalization when h and k are simultaneously diagonal.

Each mode decouples into a 2x2 problem with ``g = |k|/h`` and

    xi = sqrt(h^2 - |k|^2),   V_mode = c [[1, -t conj(phase)], [-t phase, 1]],
    s = sqrt(1 - g^2),  t = g / (1 + s),  c = sqrt(1/2 + 1/(2 s)),

where ``phase = k/|k|``. A negative real k therefore flips the sign of t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GapViolation, InvalidParams
from .nambu import BogoliubovMap, Problem, validate_problem

BRACKET = (0.25, 4.0)


@dataclass(frozen=True, eq=False)
class CommutativeInstance:
    h_diag: np.ndarray
    k_diag: np.ndarray

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.h_diag, dtype=float))
        k = np.atleast_1d(np.asarray(self.k_diag))
        k = k.astype(complex) if np.iscomplexobj(k) else k.astype(float)
        if h.shape != k.shape or h.ndim != 1:
            raise InvalidParams(f"h_diag {h.shape} and k_diag {k.shape} must be equal-length vectors")
        if np.any(h <= 0):
            raise InvalidParams("h_diag must be strictly positive")
        object.__setattr__(self, "h_diag", h)
        object.__setattr__(self, "k_diag", k)

    @property
    def g(self) -> np.ndarray:
        return np.abs(self.k_diag) / self.h_diag

    @property
    def valid(self) -> bool:
        return bool(np.max(self.g, initial=0.0) < 1.0)

    def to_problem(self) -> Problem:
        return validate_problem(np.diag(self.h_diag), np.diag(self.k_diag))


@dataclass(frozen=True, eq=False)
class CommutativeSolution:
    xi_diag: np.ndarray
    V_blocks: np.ndarray  # (n, 2, 2), per-mode [[c, -c t conj(ph)], [-c t ph, c]]
    phases: np.ndarray
    v_opnorm: float
    v_hs: float
    e0: float

    @property
    def map(self) -> BogoliubovMap:
        return BogoliubovMap(
            U=np.diag(self.V_blocks[:, 0, 0]), V=np.diag(self.V_blocks[:, 1, 0])
        )


def _require_gap(c: CommutativeInstance) -> None:
    if not c.valid:
        raise GapViolation(f"max g = {np.max(c.g):.12g} >= 1")


def _mode_parameters(g):
    s = np.sqrt(1.0 - g**2)
    t = g / (1.0 + s)
    c = np.sqrt(0.5 + 0.5 / s)
    return s, t, c


def commutative_diagonalize(c: CommutativeInstance) -> CommutativeSolution:
    _require_gap(c)
    h, k = c.h_diag, c.k_diag
    g = c.g
    absk = np.abs(k)
    if np.iscomplexobj(k):
        phase = np.exp(1j * np.angle(k))
    else:
        phase = np.where(k < 0, -1.0, 1.0).astype(complex)
    s, t, cc = _mode_parameters(g)
    xi = np.sqrt(h**2 - absk**2)

    blocks = np.empty((h.size, 2, 2), dtype=complex)
    blocks[:, 0, 0] = cc
    blocks[:, 1, 1] = cc
    blocks[:, 1, 0] = -cc * t * phase
    blocks[:, 0, 1] = -cc * t * phase.conj()
    return CommutativeSolution(
        xi_diag=xi,
        V_blocks=blocks,
        phases=phase,
        v_opnorm=float(np.max(cc * (1.0 + t), initial=1.0)),
        v_hs=float(np.sqrt(np.sum((cc * t) ** 2))),
        # xi - h written as -|k|^2 / (xi + h) to avoid cancellation for small g
        e0=float(-0.5 * np.sum(absk**2 / (xi + h))),
    )


def commutative_energy_bounds(c: CommutativeInstance, tol: float = 1e-12) -> bool:
    """Per mode: ``-k^2/(2h) >= xi - h >= -k^2/h``."""
    _require_gap(c)
    h = c.h_diag
    k2 = np.abs(c.k_diag) ** 2
    shift = -k2 / (np.sqrt(h**2 - k2) + h)
    return bool(np.all(-0.5 * k2 / h >= shift - tol) and np.all(shift >= -k2 / h - tol))


@dataclass(frozen=True, eq=False)
class ScalingReport:
    g: np.ndarray
    v_ratio: np.ndarray
    v_hs_ratio: np.ndarray
    energy_ratio: np.ndarray
    saturation: np.ndarray
    bracket: tuple = BRACKET

    @property
    def within_brackets(self) -> bool:
        lo, hi = self.bracket
        return all(
            bool(np.all((r >= lo) & (r <= hi)))
            for r in (self.v_ratio, self.v_hs_ratio, self.energy_ratio)
        )


def commutative_scaling_relations(g_grid) -> ScalingReport:
    """Single-mode instances h = 1, k = g compared with the three asymptotic forms.

    Ratios reported: ``||V|| (1-g)^{1/4}``, ``||V_block||_HS (1-g)^{1/4} / g`` and
    ``|E0| / ||k h^{-1/2}||_HS^2`` (= |E0|/g^2). ``saturation`` is
    ``||V|| ((1-g)/(1+g))^{1/4}``, identically 1.
    """
    g = np.asarray(g_grid, dtype=float)
    if np.any((g <= 0) | (g >= 1)):
        raise InvalidParams("grid values must lie in (0, 1)")
    s, t, c = _mode_parameters(g)
    v_op = c * (1.0 + t)
    v_hs = c * t
    e0 = -0.5 * g**2 / (1.0 + s)
    return ScalingReport(
        g=g,
        v_ratio=v_op * (1.0 - g) ** 0.25,
        v_hs_ratio=v_hs * (1.0 - g) ** 0.25 / g,
        energy_ratio=np.abs(e0) / g**2,
        saturation=v_op * ((1.0 - g) / (1.0 + g)) ** 0.25,
    )
