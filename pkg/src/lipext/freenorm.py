"""Free-space (predual) norm on finite pointed spaces.

The norm of a zero-sum weight vector equals the optimal value of a
minimum-cost transshipment problem on the complete graph over the points,
with arc costs given by the distances.  Strong LP duality supplies a
1-Lipschitz potential certifying the value from the other side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import NotZeroSumError, SolverFailureError
from .metric import PointedSubspace, ScalarField

ZERO_SUM_TOL = 1e-12
DUALITY_TOL = 1e-9


@dataclass(frozen=True)
class SignedWeightVector:
    """Zero-sum real weights over a pointed subspace."""

    space: PointedSubspace
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.space.n,):
            raise ValueError("weight count does not match the subspace")
        scale = max(1.0, np.abs(w).sum())
        if abs(w.sum()) > ZERO_SUM_TOL * scale:
            raise NotZeroSumError(f"weights sum to {w.sum():.3e}, not zero")


@dataclass(frozen=True)
class FlowAssignment:
    """Nonnegative flow on ordered point pairs; the primal certificate."""

    flow: np.ndarray  # (n, n), zero diagonal

    def divergence(self) -> np.ndarray:
        return self.flow.sum(axis=1) - self.flow.sum(axis=0)

    @property
    def cost_against(self):
        return lambda dist: float((self.flow * dist).sum())


def _solve_transshipment(dist: np.ndarray, b: np.ndarray, need_certificates: bool):
    """min sum g_uv d(u,v) s.t. divergence(g) = b, g >= 0, on the complete graph."""
    n = dist.shape[0]
    if n == 1:
        return 0.0, np.zeros((1, 1)), np.zeros(1)
    if n == 2:
        d = float(dist[0, 1])
        g = np.zeros((2, 2))
        if b[0] > 0:
            g[0, 1] = b[0]
        else:
            g[1, 0] = -b[0]
        val = abs(b[0]) * d
        pot = np.array([0.0, -d]) if b[0] >= 0 else np.array([0.0, d])
        return val, g, pot

    arcs = [(u, v) for u in range(n) for v in range(n) if u != v]
    c = np.array([dist[u, v] for u, v in arcs])
    A = np.zeros((n, len(arcs)))
    for j, (u, v) in enumerate(arcs):
        A[u, j] += 1.0
        A[v, j] -= 1.0
    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if not res.success:
        raise SolverFailureError(f"transshipment LP failed: {res.message}")
    flow = np.zeros((n, n))
    for j, (u, v) in enumerate(arcs):
        flow[u, v] = res.x[j]
    value = float(res.fun)
    pot = np.zeros(n)
    if need_certificates:
        y = np.asarray(res.eqlin.marginals, dtype=float)
        # HiGHS sign convention varies with direction; pick the sign whose
        # dual objective matches the primal value
        if abs(float(b @ y) - value) > abs(float(b @ (-y)) - value):
            y = -y
        pot = y
    return value, flow, pot


def free_norm(a: SignedWeightVector) -> float:
    """The free-space norm of a zero-sum weight vector (LP optimum)."""
    value, _, _ = _solve_transshipment(a.space.dist, a.weights, False)
    return value


def free_norm_witness(a: SignedWeightVector):
    """Norm plus both certificates: a 1-Lipschitz potential and an optimal flow.

    Returns (value, potential ScalarField normalized to vanish at the
    basepoint, FlowAssignment).
    """
    dist = a.space.dist
    value, flow, pot = _solve_transshipment(dist, a.weights, True)
    pot = pot - pot[a.space.base_pos]
    f = ScalarField(a.space, pot)
    return value, f, FlowAssignment(flow)


def free_norm_raw(dist: np.ndarray, weights: np.ndarray) -> float:
    """free_norm on a bare distance matrix; used by operator-norm loops."""
    value, _, _ = _solve_transshipment(np.asarray(dist, float), np.asarray(weights, float), False)
    return value
