"""Low-distortion embedding of truncated uniform trees into the upper half-plane.

Each vertex receives a square frame: the root square is centered at (0, 1),
and every child square sits on the subdivided bottom side of its parent,
shrunk by n = k^2 + 1.  The embedding sends a vertex to its square center and
an edge to the hyperbolic geodesic between the two centers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidVertexError, NotATkTreeError
from .spaces import (
    RootedTree,
    hyperbolic_rho,
    rho0_pairwise,
    rho_pairwise,
    tree_distance,
)


@dataclass(frozen=True)
class VertexCoord:
    """Level, left-to-right ordinal, and base-(k+1) digit list of a vertex."""

    level: int
    ordinal: int
    digits: tuple  # little-endian, length == level


@dataclass(frozen=True)
class SquareFrame:
    """Center and side length of a vertex square in the half-plane."""

    center: tuple  # (c1, c2), c2 > 0
    side: float


def _check_tk(t: RootedTree) -> int:
    """Verify the tree is a depth-truncated uniform tree; return its arity - 1."""
    root = t.root
    kids = {v: t.children(v) for v in range(t.n)}
    sizes = {len(c) for c in kids.values() if c}
    if len(sizes) > 1:
        raise NotATkTreeError("vertices have differing child counts")
    if any(abs(t.edge_len[v] - 1.0) > 0 for v in range(t.n) if v != root):
        raise NotATkTreeError("edges must have unit length")
    if sizes:
        arity = sizes.pop()
        depth = max(t.level(v) for v in range(t.n))
        if any(kids[v] and t.level(v) >= depth for v in range(t.n)):
            raise NotATkTreeError("children below the truncation depth")
        if any(not kids[v] and t.level(v) < depth for v in range(t.n)):
            raise NotATkTreeError("missing children above the truncation depth")
        return arity - 1
    return 0  # single root


def assign_coordinates(t: RootedTree) -> list[VertexCoord]:
    """Per-vertex (level, ordinal, digits); siblings ordered by creation index."""
    k = _check_tk(t)
    base = k + 1 if k else 2
    coords: list = [None] * t.n
    root = t.root
    coords[root] = VertexCoord(0, 0, tuple())
    order = sorted(range(t.n), key=t.level)
    counters: dict = {}
    for v in order:
        if v == root:
            continue
        par = t.parent[v]
        jp = coords[par].ordinal
        c = counters.get(par, 0)
        counters[par] = c + 1
        j = jp * base + c
        lvl = coords[par].level + 1
        digits, jj = [], j
        for _ in range(lvl):
            digits.append(jj % base)
            jj //= base
        coords[v] = VertexCoord(lvl, j, tuple(digits))
    return coords


def square_frames(coords: list[VertexCoord], k: int,
                  parents=None, tree: RootedTree | None = None) -> list[SquareFrame]:
    """Square frames from the recurrence c2(v) = c2(parent)/n, n = k^2 + 1."""
    if tree is not None:
        parents = tree.parent
    if parents is None:
        raise ValueError("need parent links (pass parents= or tree=)")
    n = k * k + 1
    mu0 = 2.0 * (n - 1) / (n + 1)
    frames: list = [None] * len(coords)
    order = sorted(range(len(coords)), key=lambda v: coords[v].level)
    for v in order:
        cv = coords[v]
        if cv.level == 0:
            frames[v] = SquareFrame((0.0, 1.0), mu0)
            continue
        par = parents[v]
        if par is None or frames[par] is None or coords[par].level != cv.level - 1:
            raise InvalidVertexError(f"incoherent coordinates at vertex {v}")
        fp = frames[par]
        mu = fp.side / n
        c2 = fp.center[1] / n
        c1 = fp.center[0] + 0.5 * mu * (2.0 * cv.digits[0] * k - k * k)
        frames[v] = SquareFrame((c1, c2), mu)
    return frames


def embed_tree(t: RootedTree, k: int | None = None):
    """Coordinates, frames and the (n, 2) array of embedded vertex centers."""
    kk = _check_tk(t)
    if k is not None and kk and k != kk:
        raise NotATkTreeError(f"tree arity {kk + 1} does not match k={k}")
    k = kk if kk else (k or 2)
    coords = assign_coordinates(t)
    frames = square_frames(coords, k, parents=t.parent)
    pts = np.array([f.center for f in frames])
    return coords, frames, pts


def _geodesic_point(p, q, s: float):
    """Point at hyperbolic arclength s from p along the geodesic toward q."""
    p1, p2 = p
    q1, q2 = q
    if abs(p1 - q1) < 1e-15 * max(1.0, abs(p1), abs(q1)):
        # vertical geodesic: exponential motion in the height
        sign = 1.0 if q2 > p2 else -1.0
        return (p1, p2 * math.exp(sign * s))
    # circle orthogonal to the axis through both points
    x0 = (q1 * q1 + q2 * q2 - p1 * p1 - p2 * p2) / (2.0 * (q1 - p1))
    r = math.hypot(p1 - x0, p2)
    th_p = math.atan2(p2, p1 - x0)
    th_q = math.atan2(q2, q1 - x0)
    # arclength parameter u = log tan(theta/2); ds = |du|
    up = math.log(math.tan(th_p / 2.0))
    uq = math.log(math.tan(th_q / 2.0))
    u = up + s * (1.0 if uq > up else -1.0)
    th = 2.0 * math.atan(math.exp(u))
    return (x0 + r * math.cos(th), r * math.sin(th))


def embed_edge_point(t: RootedTree, frames: list[SquareFrame], v: int, tparam: float):
    """Image of the edge point at fraction tparam from the parent end toward v."""
    if t.parent[v] is None:
        raise InvalidVertexError("the root has no parent edge")
    if not 0.0 <= tparam <= 1.0:
        raise ValueError(f"edge parameter must lie in [0, 1], got {tparam}")
    cp = frames[t.parent[v]].center
    cv = frames[v].center
    rho_v = hyperbolic_rho(cp, cv)
    if tparam == 0.0:
        return cp
    if tparam == 1.0:
        return cv
    return _geodesic_point(cp, cv, rho_v * tparam)


@dataclass(frozen=True)
class DistortionReport:
    """Extremes of metric(I(v), I(w)) / d(v, w) over vertex pairs."""

    metric: str  # "rho" or "rho0"
    min_ratio: float
    max_ratio: float
    pair_count: int
    n: int  # k^2 + 1
    bounds_ok: bool
    edge_rho0_max_err: float

    @property
    def envelope(self) -> float:
        return self.max_ratio / self.min_ratio


def distortion_report(t: RootedTree, metric: str = "rho0",
                      max_pairs: int | None = None, seed: int = 0) -> DistortionReport:
    """Sweep vertex pairs (exhaustive, or sampled beyond max_pairs).

    Checks the theoretical envelope: ratios within [log(n)/8, log(n)] for the
    comparison gauge, and within [log(n)/64, 4 log(n)] for the hyperbolic
    metric (so the spread never exceeds 256).
    """
    k = _check_tk(t)
    if k == 0:
        raise NotATkTreeError("need at least one level to report distortion")
    _, frames, pts = embed_tree(t)
    n = k * k + 1
    logn = math.log(n)
    D = rho_pairwise(pts) if metric == "rho" else rho0_pairwise(pts)
    nv = t.n
    td = np.zeros((nv, nv))
    for v in range(nv):
        for w in range(v + 1, nv):
            td[v, w] = td[w, v] = tree_distance(t, v, w)
    iu = np.triu_indices(nv, k=1)
    ratios = D[iu] / td[iu]
    total = len(ratios)
    if max_pairs is not None and total > max_pairs:
        rng = np.random.default_rng(seed)
        ratios = rng.choice(ratios, size=max_pairs, replace=False)
    rmin, rmax = float(ratios.min()), float(ratios.max())
    if metric == "rho0":
        lo, hi = logn / 8.0, logn
    elif metric == "rho":
        lo, hi = logn / 64.0, 4.0 * logn
    else:
        raise ValueError(f"unknown metric {metric!r}")
    tol = 1e-9
    ok = (rmin >= lo - tol) and (rmax <= hi + tol)
    # every embedded edge has gauge length exactly log n
    edge_err = 0.0
    for v in range(nv):
        p = t.parent[v]
        if p is not None:
            g = rho0_pairwise(pts[[v, p]])[0, 1]
            edge_err = max(edge_err, abs(g - logn))
    return DistortionReport(metric, rmin, rmax, len(ratios), n, ok, edge_err)
