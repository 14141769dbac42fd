"""The concrete extension operators: McShane, measure averaging, Whitney
gluing over a lattice, and metric projection onto convex bodies; plus exact
operator-norm evaluation and doubling-constant measurement.

Ball conventions are OPEN throughout; the averaging operator falls back to
the closed ball only when the open one carries no mass, which keeps it total
on finite spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyBallMassError,
    EmptySampleError,
    EmptySourceError,
    LocalOperatorMismatchError,
    UnsupportedBodyError,
)
from .freenorm import free_norm_raw
from .metric import (
    FiniteMetricSpace,
    PointedSubspace,
    ScalarField,
    lipschitz_seminorm,
)
from .spaces import Lattice

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightMatrix:
    """A linear extension operator Lip(S) -> Lip(F) stored as an |F| x |S| matrix.

    Rows sum to one (the operator commutes with constants) and rows indexed by
    S-points are indicators (the extension property).
    """

    source: PointedSubspace
    target: FiniteMetricSpace
    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        if w.shape != (self.target.n, self.source.n):
            raise ValueError("weight matrix shape mismatch")

    def check(self, tol: float = ROW_SUM_TOL):
        """Assert the two structural invariants; raises on violation."""
        sums = self.w.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > tol:
            raise ValueError("rows must sum to 1")
        for pos, m in enumerate(self.source.indices):
            row = np.zeros(self.source.n)
            row[pos] = 1.0
            if np.max(np.abs(self.w[m] - row)) > tol:
                raise ValueError(f"row {m} is not the extension indicator")

    def apply(self, f) -> np.ndarray:
        """Extend values given on S (in subspace order) to the whole target."""
        if isinstance(f, ScalarField):
            f = f.values
        return self.w @ np.asarray(f, dtype=float)

    def to_json(self) -> dict:
        return {"source_indices": list(self.source.indices),
                "rows": self.w.tolist()}


@dataclass(frozen=True)
class MeasureFamily:
    """Per-point nonnegative measures mu_m over the whole space."""

    space: FiniteMetricSpace
    mu: np.ndarray  # (n, n): row m is the measure mu_m
    shared: bool

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float)
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        if mu.shape != (self.space.n, self.space.n):
            raise ValueError("measure array must be n x n")
        if np.any(mu < 0):
            raise ValueError("measures must be nonnegative")
        if np.any(mu.sum(axis=1) <= 0):
            raise ValueError("each mu_m must carry positive total mass")

    def ball_mass(self, m: int, R: float, closed: bool = False) -> float:
        d = self.space.dist[m]
        mask = (d <= R) if closed else (d < R)
        return float(self.mu[m, mask].sum())


def counting_measure(space: FiniteMetricSpace) -> MeasureFamily:
    """The shared counting measure: every point has mass one."""
    return MeasureFamily(space, np.ones((space.n, space.n)), shared=True)


def mcshane_extend(f, S: PointedSubspace, F: FiniteMetricSpace | None = None) -> ScalarField:
    """Inf-convolution extension Ef(m) = min_s f(s) + L d(m, s).

    Preserves the Lipschitz seminorm exactly; nonlinear.
    """
    if F is None:
        F = S.parent
    if S.n == 0:
        raise EmptySourceError("cannot extend from an empty set")
    if isinstance(f, ScalarField):
        f = f.values
    f = np.asarray(f, dtype=float)
    L = lipschitz_seminorm(f, S)
    idx = np.array(S.indices)
    vals = (f[None, :] + L * F.dist[:, idx]).min(axis=1)
    # exact restriction: the s-term at m in S dominates by the Lipschitz bound
    vals[idx] = f
    return ScalarField(F, vals)


def nearest_point_map(F: FiniteMetricSpace, S_indices):
    """Distance to S and the index-minimal nearest S-point, per point of F.

    Returns (d, p): d[m] = dist(m, S); p[m] = the element of S (a parent
    index) of minimal position attaining d[m].
    """
    S_indices = tuple(int(i) for i in S_indices)
    if not S_indices:
        raise EmptySourceError("S must be nonempty")
    idx = np.array(S_indices)
    sub = F.dist[:, idx]
    d = sub.min(axis=1)
    p = idx[np.argmin(sub, axis=1)]  # argmin takes the first minimum: minimal position
    return d, p


def averaging_operator(F: FiniteMetricSpace, S_indices,
                       measures: MeasureFamily | None = None,
                       basepoint: int | None = None) -> WeightMatrix:
    """Measure-averaging extension operator.

    On S the rows are indicators; elsewhere row m averages f over the
    nearest-point map of the open ball of radius dist(m, S) around m,
    weighted by mu_m.
    """
    S_indices = tuple(int(i) for i in S_indices)
    if not S_indices:
        raise EmptySourceError("S must be nonempty")
    if measures is None:
        measures = counting_measure(F)
    d, p = nearest_point_map(F, S_indices)
    pos_of = {s: k for k, s in enumerate(S_indices)}
    w = np.zeros((F.n, len(S_indices)))
    sset = set(S_indices)
    for m in range(F.n):
        if m in sset:
            w[m, pos_of[m]] = 1.0
            continue
        R = d[m]
        mask = F.dist[m] < R
        mass = float(measures.mu[m, mask].sum())
        if mass <= 0:
            mask = F.dist[m] <= R
            mass = float(measures.mu[m, mask].sum())
        if mass <= 0:
            raise EmptyBallMassError(m)
        for mp in np.nonzero(mask)[0]:
            w[m, pos_of[int(p[mp])]] += measures.mu[m, mp]
        w[m] /= mass
    S = F.subspace(S_indices, basepoint)
    return WeightMatrix(S, F, w)


@dataclass(frozen=True)
class PartitionOfUnity:
    """Partition of unity subordinate to the open R-balls of a lattice."""

    lattice: Lattice
    rho: np.ndarray  # (|centers|, n)
    multiplicity: int

    @property
    def lip_bound(self) -> float:
        """The guaranteed per-function seminorm bound (2/R)(2 mu + 1)."""
        R = self.lattice.radius
        return (2.0 / R) * (2 * self.multiplicity + 1)


def whitney_partition(lat: Lattice) -> PartitionOfUnity:
    """Build rho_gamma = psi(dist to ball complement) / s over the lattice balls.

    psi ramps linearly from 0 at 0 to 1 at R/2, so each rho_gamma vanishes
    off its open R-ball, and the R/2-ball cover makes the normalizer s >= 1.
    """
    space, R = lat.space, lat.radius
    n = space.n
    phis = np.zeros((len(lat.centers), n))
    inside = np.zeros((len(lat.centers), n), dtype=bool)
    for k, g in enumerate(lat.centers):
        ball = space.dist[g] < R
        inside[k] = ball
        comp = ~ball
        if comp.any():
            d_g = np.where(ball, space.dist[:, comp].min(axis=1), 0.0)
        else:
            d_g = np.full(n, R)  # ball is everything: treat as deep inside
        phis[k] = np.clip(2.0 * d_g / R, 0.0, 1.0)
    s = phis.sum(axis=0)
    if np.any(s < 1.0 - 1e-12):
        raise AssertionError("cover normalizer dropped below 1")
    rho = phis / s
    mult = int(inside.sum(axis=0).max())
    return PartitionOfUnity(lat, rho, mult)


def _default_local_ops(lat: Lattice):
    """Averaging operators with counting measure inside each lattice ball."""
    space, R = lat.space, lat.radius
    ops = []
    for g in lat.centers:
        ball = np.nonzero(space.dist[g] < R)[0]
        ball_space = FiniteMetricSpace(
            tuple(space.labels[i] for i in ball),
            space.dist[np.ix_(ball, ball)],
        )
        local_S = [int(np.nonzero(ball == c)[0][0]) for c in lat.centers if c in set(ball)]
        ops.append((tuple(int(b) for b in ball),
                    averaging_operator(ball_space, local_S)))
    return ops


def whitney_operator(lat: Lattice, local_ops=None, basepoint: int | None = None) -> WeightMatrix:
    """Glue local extension operators with the lattice partition of unity.

    local_ops, when given, is a list over centers of (ball_indices, WeightMatrix)
    where the matrix extends from the lattice points inside the ball to the ball.
    """
    pou = whitney_partition(lat)
    space = lat.space
    centers = lat.centers
    if local_ops is None:
        local_ops = _default_local_ops(lat)
    if len(local_ops) != len(centers):
        raise LocalOperatorMismatchError("one local operator per center required")
    col_of = {c: k for k, c in enumerate(centers)}
    W = np.zeros((space.n, len(centers)))
    for k, (ball, E) in enumerate(local_ops):
        ball = tuple(ball)
        gamma_in_ball = [c for c in centers if c in set(ball)]
        if E.w.shape != (len(ball), len(gamma_in_ball)):
            raise LocalOperatorMismatchError(
                f"operator {k} has shape {E.w.shape}, expected "
                f"({len(ball)}, {len(gamma_in_ball)})")
        cols = [col_of[c] for c in gamma_in_ball]
        for bi, m in enumerate(ball):
            r = pou.rho[k, m]
            if r:
                W[m, cols] += r * E.w[bi]
    S = space.subspace(centers, basepoint)
    return WeightMatrix(S, space, W)


def whitney_extend(f, lat: Lattice, local_ops=None) -> ScalarField:
    """Extend values on the lattice centers to the whole space."""
    op = whitney_operator(lat, local_ops)
    return ScalarField(lat.space, op.apply(f))


# ---------------------------------------------------------------------------
# metric projection onto convex bodies in Euclidean space


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float


@dataclass(frozen=True)
class HalfspaceIntersection:
    """Points x with A x <= b."""

    A: tuple
    b: tuple


def project_to_body(body, x: np.ndarray, tol: float = 1e-10, max_iter: int = 10000) -> np.ndarray:
    """Euclidean nearest-point projection onto a supported convex body."""
    x = np.asarray(x, dtype=float)
    if isinstance(body, Box):
        return np.clip(x, np.asarray(body.lo, float), np.asarray(body.hi, float))
    if isinstance(body, Ball):
        c = np.asarray(body.center, float)
        v = x - c
        nrm = np.linalg.norm(v)
        if nrm <= body.radius:
            return x.copy()
        return c + v * (body.radius / nrm)
    if isinstance(body, HalfspaceIntersection):
        A = np.asarray(body.A, float)
        b = np.asarray(body.b, float)
        norms2 = (A * A).sum(axis=1)
        # Dykstra's alternating projections onto the halfspaces
        y = x.copy()
        corr = np.zeros((A.shape[0], x.size))
        for _ in range(max_iter):
            prev = y.copy()
            for i in range(A.shape[0]):
                z = y + corr[i]
                viol = float(A[i] @ z - b[i])
                proj = z - max(viol, 0.0) / norms2[i] * A[i] if viol > 0 else z
                corr[i] = z - proj
                y = proj
            if np.linalg.norm(y - prev) < tol:
                break
        return y
    raise UnsupportedBodyError(f"unsupported body {type(body).__name__}")


def metric_projection_extend(f, sample_points, body, query_points) -> np.ndarray:
    """Extend f, sampled on the body, to arbitrary points via f(p_C(x)).

    Each query is projected onto the body and then snapped to the nearest
    sample point (lowest index on ties).
    """
    sample = np.asarray(sample_points, dtype=float)
    if sample.size == 0:
        raise EmptySampleError("need at least one sample point of the body")
    f = np.asarray(f, dtype=float)
    if f.shape[0] != sample.shape[0]:
        raise ValueError("one value per sample point required")
    out = np.empty(len(query_points))
    for i, x in enumerate(np.asarray(query_points, dtype=float)):
        p = project_to_body(body, x)
        j = int(np.argmin(np.linalg.norm(sample - p, axis=1)))
        out[i] = f[j]
    return out


# ---------------------------------------------------------------------------
# operator norms and doubling constants


def operator_norm(E: WeightMatrix) -> float:
    """Exact norm of E : Lip(S) -> Lip(F).

    Equals the max over target pairs of the free-space norm of the row
    difference divided by the pair distance.
    """
    F, S = E.target, E.source
    if S.n < 2:
        return 0.0
    dS = S.dist
    dF = F.dist
    if S.n == 2:
        # free_norm((t, -t)) = |t| d(s1, s2): fully vectorized
        dd = float(dS[0, 1])
        diffs = np.abs(E.w[:, None, 0] - E.w[None, :, 0]) * dd
        iu = np.triu_indices(F.n, k=1)
        return float((diffs[iu] / dF[iu]).max())
    best = 0.0
    for m in range(F.n):
        for mp in range(m + 1, F.n):
            a = E.w[m] - E.w[mp]
            if not np.any(a):
                continue
            best = max(best, free_norm_raw(dS, a) / dF[m, mp])
    return best


def _radius_grid(dists: np.ndarray) -> np.ndarray:
    """Occurring positive distances plus midpoints between consecutive ones."""
    vals = np.unique(dists[dists > 0])
    if vals.size == 0:
        return vals
    mids = (vals[:-1] + vals[1:]) / 2.0
    small = vals[0] / 2.0
    return np.unique(np.concatenate([[small], vals, mids]))


def doubling_constants(measures: MeasureFamily, l: float):
    """Measured (D(l), C, A) of a measure family on a finite space.

    All three are attained maxima over the finite set of occurring radii,
    which is exhaustive on a finite space.
    """
    if not l > 1:
        raise ValueError("need l > 1")
    space, mu = measures.space, measures.mu
    n = space.n
    D = 1.0
    A = 0.0
    for m in range(n):
        radii = _radius_grid(space.dist[m])
        if radii.size == 0:
            continue
        masses = np.array([measures.ball_mass(m, R) for R in radii])
        lmasses = np.array([measures.ball_mass(m, l * R) for R in radii])
        ok = masses > 0
        if ok.any():
            D = max(D, float((lmasses[ok] / masses[ok]).max()))
        for i in range(len(radii)):
            for j in range(i + 1, len(radii)):
                v1, v2 = masses[i], masses[j]
                if v2 > 0 and radii[j] > radii[i]:
                    A = max(A, (v2 - v1) * radii[j] / (v2 * (radii[j] - radii[i])))
    C = 0.0
    if not measures.shared:
        for m1 in range(n):
            for m2 in range(m1 + 1, n):
                dm = space.dist[m1, m2]
                if dm <= 0:
                    continue
                tvrow = np.abs(mu[m1] - mu[m2])
                for m in (m1, m2):
                    for R in _radius_grid(space.dist[m]):
                        mask = space.dist[m] < R
                        v = float(mu[m, mask].sum())
                        if v > 0:
                            tv = float(tvrow[mask].sum())
                            C = max(C, tv * R / (v * dm))
    return D, C, A
