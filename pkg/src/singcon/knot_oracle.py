"""Brute-force search for SU(2) representations of torus-knot groups.

This is deliberately ignorant of the rotation-label structure used by
:mod:`singcon.knots`.  Pairs ``(U, V)`` are put in the normal form

    U = diag(e^{i t1}, e^{-i t1}),   V = cos t2 + sin t2 (cos phi i + sin phi j)

with ``t1, t2, phi`` in ``[0, pi]``, which meets every conjugacy class of
pairs with ``U`` non-central exactly once.  A grid over that cube keeps the
points where ``U^p - V^q`` and the meridian trace defect are small, and each
connected cluster of surviving cells is refined by least squares.

Reducible pairs form positive-dimensional families in this normal form (any
``phi`` works once ``V`` is central), so the grid is also gated on the
commutator ``[U, V] = 2 sin t1 sin t2 sin phi k`` exceeding its Lipschitz
slack; only irreducible representations are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .knots import TorusKnot
from .params import holonomy

_I = np.array([[1j, 0], [0, -1j]])
_J = np.array([[0, 1], [-1, 0]], dtype=complex)


@dataclass(frozen=True)
class OracleSolution:
    t1: float
    t2: float
    phi: float
    relation_error: float
    trace_error: float

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return _pair(np.array([self.t1]), np.array([self.t2]), np.array([self.phi]))


def _pair(t1: np.ndarray, t2: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    U = np.zeros(t1.shape + (2, 2), dtype=complex)
    U[..., 0, 0] = np.exp(1j * t1)
    U[..., 1, 1] = np.exp(-1j * t1)
    c, s = np.cos(t2)[..., None, None], np.sin(t2)[..., None, None]
    axis = np.cos(phi)[..., None, None] * _I + np.sin(phi)[..., None, None] * _J
    V = c * np.eye(2) + s * axis
    if U.shape[0] == 1:
        return U[0], V[0]
    return U, V


def _inverse(V: np.ndarray) -> np.ndarray:
    return np.swapaxes(V.conj(), -1, -2)


@lru_cache(maxsize=8)
def _candidates(p: int, q: int, s: int, r: int, n: int):
    """Grid cells passing the alpha-independent gates, with their meridian traces.

    A cell survives when ``|U^p - V^q|`` is within the Lipschitz allowance
    and the commutator clears its own slack.  Cached per knot and resolution.
    """
    axis = np.linspace(0.0, math.pi, n)
    h = axis[1] - axis[0]
    zeros = np.zeros(n)
    U, _ = _pair(axis, zeros, zeros)
    t2, phi = np.meshgrid(axis, axis, indexing="ij")
    _, V = _pair(np.zeros(n * n), t2.ravel(), phi.ravel())
    mp = np.linalg.matrix_power
    Up, Us = mp(U, p), mp(U, s)
    Vq, Vr = mp(V, q), mp(_inverse(V), r)
    sines = np.sin(axis)
    comm_inner = np.outer(sines, sines).ravel()
    # the nearest grid point is within h/2 per coordinate
    rel_tol = math.sqrt(2) * (p + 2 * q) * h
    comm_tol = 3 * math.sqrt(2) * h
    cells, relations, traces = [], [], []
    for i in range(n):
        relation = np.linalg.norm((Up[i] - Vq).reshape(-1, 4), axis=1)
        keep = np.flatnonzero((relation < rel_tol) & (2 * math.sqrt(2) * sines[i] * comm_inner > comm_tol))
        cells.append(np.column_stack([np.full(len(keep), i), keep // n, keep % n]))
        relations.append(relation[keep])
        traces.append(np.einsum("ab,kba->k", Us[i], Vr[keep]).real)
    return axis, np.concatenate(cells), np.concatenate(relations), np.concatenate(traces)


def _residual(x: np.ndarray, K: TorusKnot, target: float) -> np.ndarray:
    s, r = K.meridian_exponents
    U, V = _pair(x[:1], x[1:2], x[2:3])
    mp = np.linalg.matrix_power
    D = mp(U, K.p) - mp(V, K.q)
    tr = np.trace(mp(U, s) @ mp(_inverse(V), r)).real
    return np.concatenate([D.real.ravel(), D.imag.ravel(), [tr - target]])


def su2_grid_oracle(K: TorusKnot, alpha, resolution: int = 121, tol: float = 1e-10) -> list[OracleSolution]:
    """Irreducible representations with meridian trace ``2 cos(2 pi alpha)``.

    ``resolution`` is the number of grid points per axis on ``[0, pi]``.
    Solutions closer than about ``3h`` to the reducible locus can be missed.
    """
    a = float(holonomy(alpha).alpha)
    target = 2 * math.cos(2 * math.pi * a)
    s, r = K.meridian_exponents
    axis, cells, relation, trace = _candidates(K.p, K.q, s, r, resolution)
    h = axis[1] - axis[0]
    defect = np.abs(trace - target)
    hit = defect < 2 * (s + 2 * r) * h
    cells, score = cells[hit], relation[hit] + defect[hit]
    if len(cells) == 0:
        return []
    # clusters of grid-adjacent cells (26-connectivity)
    pairs = np.array(sorted(cKDTree(cells).query_pairs(1.8)), dtype=int).reshape(-1, 2)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(cells),) * 2)
    count, labels = connected_components(graph, directed=False)
    seeds = sorted(
        tuple(cells[np.flatnonzero(labels == k)[np.argmin(score[labels == k])]]) for k in range(count)
    )

    found: list[OracleSolution] = []
    for seed in seeds:
        x0 = np.clip(axis[list(seed)], h / 8, math.pi - h / 8)
        fit = least_squares(
            _residual, x0, args=(K, target), bounds=(0.0, math.pi),
            xtol=1e-15, ftol=1e-15, gtol=1e-15, method="trf",
        )
        res = _residual(fit.x, K, target)
        if np.linalg.norm(res) > tol:
            continue
        t1, t2, phi = (float(v) for v in fit.x)
        if any(abs(t1 - f.t1) + abs(t2 - f.t2) + abs(phi - f.phi) < 1e-6 for f in found):
            continue
        U, V = _pair(fit.x[:1], fit.x[1:2], fit.x[2:3])
        if np.linalg.norm(U @ V - V @ U) <= 1e-6:
            continue
        found.append(OracleSolution(
            t1, t2, phi,
            relation_error=float(np.linalg.norm(res[:-1])),
            trace_error=abs(float(res[-1])),
        ))
    return found
