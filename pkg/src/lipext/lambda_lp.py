"""Exact computation of the optimal linear extension constant on finite spaces.

The constant lambda(S, F) = inf { ||E|| : E extends from S to F } is the
optimum of one linear program: minimize t over row-sum-one weight matrices W
such that, for every pair of target points, a transshipment of the row
difference costs at most t times the pair distance.  The transshipment blocks
encode the free-space norm of each row difference, so the LP optimum is the
exact operator norm of the best W.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

from .errors import EnumerationTooLargeError, LPSizeError, SolverFailureError
from .metric import FiniteMetricSpace
from .operators import WeightMatrix

LP_VAR_CAP = 200_000
ENUM_CAP = 4096


@dataclass(frozen=True)
class LambdaResult:
    """Optimal extension constant plus one optimal operator witnessing it."""

    value: float
    optimal_operator: WeightMatrix
    active_pairs: tuple
    solver_stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "lambda": self.value,
            "S": list(self.optimal_operator.source.indices),
            "operator": self.optimal_operator.to_json(),
            "active_pairs": [list(p) for p in self.active_pairs],
        }


def _lambda_lp(F: FiniteMetricSpace, S_indices, nonneg: bool,
               cap: int = LP_VAR_CAP) -> LambdaResult:
    S_indices = tuple(int(i) for i in S_indices)
    nS = len(S_indices)
    nF = F.n
    if nS < 2:
        raise ValueError("need at least two source points")
    sset = set(S_indices)
    pos_of = {s: k for k, s in enumerate(S_indices)}
    free_rows = [m for m in range(nF) if m not in sset]
    pairs = list(itertools.combinations(range(nF), 2))
    arcs = [(u, v) for u in range(nS) for v in range(nS) if u != v]
    n_w = len(free_rows) * nS
    n_flow = len(pairs) * len(arcs)
    n_vars = n_w + 1 + n_flow  # W entries, t, flow blocks
    if n_vars > cap:
        raise LPSizeError(f"{n_vars} variables exceeds cap {cap}")

    w_var = {(m, j): i * nS + j for i, m in enumerate(free_rows) for j in range(nS)}
    t_var = n_w
    flow0 = n_w + 1

    def fixed_row(m):
        row = np.zeros(nS)
        row[pos_of[m]] = 1.0
        return row

    eq_r, eq_c, eq_v, eq_b = [], [], [], []
    ub_r, ub_c, ub_v, ub_b = [], [], [], []
    eq_i = 0
    # row sums of free rows
    for i, m in enumerate(free_rows):
        for j in range(nS):
            eq_r.append(eq_i)
            eq_c.append(i * nS + j)
            eq_v.append(1.0)
        eq_b.append(1.0)
        eq_i += 1
    # per-pair divergence equalities and one cost inequality
    arc_cost = np.array([F.dist[S_indices[u], S_indices[v]] for u, v in arcs])
    for pidx, (m, mp) in enumerate(pairs):
        base = flow0 + pidx * len(arcs)
        rhs = np.zeros(nS)
        for sign, point in ((-1.0, m), (1.0, mp)):
            if point in sset:
                rhs -= sign * fixed_row(point)
        for s in range(nS):
            # divergence_s(g) - (w[m][s] - w[mp][s]) = 0 (fixed rows moved to rhs)
            for j, (u, v) in enumerate(arcs):
                if u == s:
                    eq_r.append(eq_i); eq_c.append(base + j); eq_v.append(1.0)
                elif v == s:
                    eq_r.append(eq_i); eq_c.append(base + j); eq_v.append(-1.0)
            for sign, point in ((-1.0, m), (1.0, mp)):
                if point not in sset:
                    eq_r.append(eq_i)
                    eq_c.append(w_var[(point, s)])
                    eq_v.append(sign)
            eq_b.append(rhs[s])
            eq_i += 1
        # sum g * d <= t * d(m, mp)
        row_i = len(ub_b)
        for j in range(len(arcs)):
            ub_r.append(row_i); ub_c.append(base + j); ub_v.append(arc_cost[j])
        ub_r.append(row_i); ub_c.append(t_var); ub_v.append(-float(F.dist[m, mp]))
        ub_b.append(0.0)

    c = np.zeros(n_vars)
    c[t_var] = 1.0
    A_eq = coo_matrix((eq_v, (eq_r, eq_c)), shape=(eq_i, n_vars))
    A_ub = coo_matrix((ub_v, (ub_r, ub_c)), shape=(len(ub_b), n_vars))
    bounds = [(None, None)] * n_w + [(0, None)] * (1 + n_flow)
    if nonneg:
        bounds[:n_w] = [(0, None)] * n_w
    res = linprog(c, A_ub=A_ub, b_ub=np.array(ub_b), A_eq=A_eq,
                  b_eq=np.array(eq_b), bounds=bounds, method="highs")
    if not res.success:
        raise SolverFailureError(f"lambda LP failed: {res.message}")
    t = float(res.fun)
    W = np.zeros((nF, nS))
    for m in sset:
        W[m] = fixed_row(m)
    for i, m in enumerate(free_rows):
        W[m] = res.x[i * nS:(i + 1) * nS]
    # pairs whose transshipment cost is tight against t * d
    active = []
    for pidx, (m, mp) in enumerate(pairs):
        base = flow0 + pidx * len(arcs)
        cost = float(arc_cost @ res.x[base:base + len(arcs)])
        if cost >= (t - 1e-7) * F.dist[m, mp]:
            active.append((m, mp))
    op = WeightMatrix(F.subspace(S_indices), F, W)
    stats = {"iterations": int(getattr(res, "nit", 0)),
             "variables": n_vars, "status": int(res.status)}
    return LambdaResult(t, op, tuple(active), stats)


def optimal_lambda(F: FiniteMetricSpace, S_indices, cap: int = LP_VAR_CAP) -> LambdaResult:
    """lambda(S, F) over general (possibly sign-changing) linear operators."""
    S_indices = tuple(int(i) for i in S_indices)
    if len(S_indices) == F.n:
        # the identity is the only extension operator
        W = np.zeros((F.n, F.n))
        for pos, s in enumerate(S_indices):
            W[s, pos] = 1.0
        op = WeightMatrix(F.subspace(S_indices), F, W)
        return LambdaResult(1.0, op, tuple(), {"iterations": 0, "variables": 0, "status": 0})
    return _lambda_lp(F, S_indices, nonneg=False, cap=cap)


def optimal_lambda_nonneg(F: FiniteMetricSpace, S_indices, cap: int = LP_VAR_CAP) -> LambdaResult:
    """Same LP restricted to nonnegative weights; upper-bounds optimal_lambda."""
    S_indices = tuple(int(i) for i in S_indices)
    if len(S_indices) == F.n:
        return optimal_lambda(F, S_indices, cap)
    return _lambda_lp(F, S_indices, nonneg=True, cap=cap)


def lambda_of_space(F: FiniteMetricSpace, max_subset: int | None = None,
                    threads: int = 1, enum_cap: int = ENUM_CAP):
    """lambda(F): maximize lambda(S, F) over proper subsets S with |S| >= 2.

    Returns (value, worst subset).  For a 2-point space the only admissible S
    is F itself, giving 1.
    """
    n = F.n
    if n < 2:
        return 1.0, tuple(range(n))
    hi = min(max_subset if max_subset else n - 1, n - 1)
    subsets = [s for size in range(2, hi + 1)
               for s in itertools.combinations(range(n), size)]
    if not subsets:
        return 1.0, tuple(range(n))
    if len(subsets) > enum_cap:
        raise EnumerationTooLargeError(f"{len(subsets)} subsets exceeds cap {enum_cap}")

    def solve(s):
        return optimal_lambda(F, s).value, s

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(solve, subsets))
    else:
        results = [solve(s) for s in subsets]
    value, worst = max(results, key=lambda r: r[0])
    return value, worst
