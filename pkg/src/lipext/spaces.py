"""Concrete space generators: l1 grids, rooted metric trees, uniform trees,
upper-half-plane distance functions and greedy R-lattices."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoverFailureError,
    InvalidVertexError,
    ProductTooLargeError,
)
from .metric import DEFAULT_PRODUCT_CAP, FiniteMetricSpace


def grid_l1(n: int, l: int, cap: int = DEFAULT_PRODUCT_CAP) -> FiniteMetricSpace:
    """Integer points of [-l, l]^n with l1 distances; labels are coordinate tuples."""
    if n < 1 or l < 1:
        raise ValueError("need n >= 1 and l >= 1")
    count = (2 * l + 1) ** n
    if count > cap:
        raise ProductTooLargeError(f"{count} points exceeds cap {cap}")
    pts = np.array(list(itertools.product(range(-l, l + 1), repeat=n)))
    dist = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
    labels = tuple(tuple(int(c) for c in p) for p in pts)
    return FiniteMetricSpace(labels, dist)


@dataclass(frozen=True)
class RootedTree:
    """Rooted tree with positive edge lengths on the non-root vertices.

    parent[v] is the parent index (None exactly for the root); edge_len[v] is
    the length of the edge from v up to its parent (ignored at the root).
    """

    parent: tuple
    edge_len: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "parent", tuple(self.parent))
        object.__setattr__(self, "edge_len", tuple(float(x) for x in self.edge_len))
        object.__setattr__(self, "labels", tuple(self.labels))
        n = len(self.parent)
        if not (len(self.edge_len) == len(self.labels) == n):
            raise ValueError("parent, edge_len and labels must have equal length")
        roots = [v for v in range(n) if self.parent[v] is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        for v in range(n):
            if v != roots[0]:
                if not self.edge_len[v] > 0:
                    raise ValueError(f"edge length at vertex {v} must be positive")
                # walk to the root; a cycle would exceed n steps
                u, steps = v, 0
                while self.parent[u] is not None:
                    u = self.parent[u]
                    steps += 1
                    if steps > n:
                        raise ValueError("parent links contain a cycle")

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return next(v for v in range(self.n) if self.parent[v] is None)

    def children(self, v: int) -> list:
        return [w for w in range(self.n) if self.parent[w] == v]

    def level(self, v: int) -> int:
        """Edge count from the root."""
        c = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            c += 1
        return c

    def depth_length(self, v: int) -> float:
        """Summed edge length from the root."""
        s = 0.0
        while self.parent[v] is not None:
            s += self.edge_len[v]
            v = self.parent[v]
        return s


def tree_distance(t: RootedTree, v: int, w: int) -> float:
    """Path-metric distance: l_v + l_w - 2 l_a over the common ancestor a(v,w)."""
    n = t.n
    if not (0 <= v < n and 0 <= w < n):
        raise InvalidVertexError(f"vertex out of range: {v}, {w}")
    dv, dw = t.depth_length(v), t.depth_length(w)
    lv, lw = t.level(v), t.level(w)
    a, b = v, w
    while lv > lw:
        a = t.parent[a]
        lv -= 1
    while lw > lv:
        b = t.parent[b]
        lw -= 1
    while a != b:
        a, b = t.parent[a], t.parent[b]
    return dv + dw - 2.0 * t.depth_length(a)


def tree_metric_space(t: RootedTree) -> FiniteMetricSpace:
    """All-pairs path metric of a rooted tree as a finite metric space."""
    n = t.n
    dist = np.zeros((n, n))
    for v in range(n):
        for w in range(v + 1, n):
            dist[v, w] = dist[w, v] = tree_distance(t, v, w)
    return FiniteMetricSpace(t.labels, dist)


def truncated_tk(k: int, depth: int, cap: int = DEFAULT_PRODUCT_CAP) -> RootedTree:
    """Complete (k+1)-ary rooted tree of the given depth, unit edges, BFS order."""
    if k < 2:
        raise ValueError("need k >= 2")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    count = sum((k + 1) ** d for d in range(depth + 1))
    if count > cap:
        raise ProductTooLargeError(f"{count} vertices exceeds cap {cap}")
    parent: list = [None]
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for _ in range(k + 1):
                parent.append(v)
                nxt.append(len(parent) - 1)
        frontier = nxt
    edge_len = [0.0] + [1.0] * (len(parent) - 1)
    labels = tuple(f"v{i}" for i in range(len(parent)))
    return RootedTree(tuple(parent), tuple(edge_len), labels)


@dataclass(frozen=True)
class HyperbolicPoint:
    """A point of the open upper half-plane."""

    x1: float
    x2: float

    def __post_init__(self):
        if not self.x2 > 0:
            raise ValueError(f"second coordinate must be positive, got {self.x2}")

    @property
    def xy(self) -> tuple:
        return (self.x1, self.x2)


def _coords(p) -> tuple:
    if isinstance(p, HyperbolicPoint):
        return p.x1, p.x2
    x1, x2 = float(p[0]), float(p[1])
    if not x2 > 0:
        raise ValueError(f"second coordinate must be positive, got {x2}")
    return x1, x2


def _arcosh(z: float) -> float:
    z = max(z, 1.0)  # absorb rounding just below 1
    return math.log(z + math.sqrt(z * z - 1.0))


def hyperbolic_rho(x, y) -> float:
    """Hyperbolic distance: arcosh(1 + |x-y|^2 / (2 x2 y2))."""
    x1, x2 = _coords(x)
    y1, y2 = _coords(y)
    sq = (x1 - y1) ** 2 + (x2 - y2) ** 2
    return _arcosh(1.0 + sq / (2.0 * x2 * y2))


def hyperbolic_rho0(x, y) -> float:
    """Comparison gauge max_i log(1 + |x_i - y_i| / min(x2, y2)).

    Not a metric in general; used only to sandwich the hyperbolic distance.
    """
    x1, x2 = _coords(x)
    y1, y2 = _coords(y)
    m = min(x2, y2)
    return max(
        math.log1p(abs(x1 - y1) / m),
        math.log1p(abs(x2 - y2) / m),
    )


def rho_pairwise(points: np.ndarray) -> np.ndarray:
    """Pairwise hyperbolic distances for an (n, 2) array of half-plane points."""
    p = np.asarray(points, dtype=float)
    sq = ((p[:, None, :] - p[None, :, :]) ** 2).sum(axis=2)
    z = 1.0 + sq / (2.0 * np.outer(p[:, 1], p[:, 1]))
    return np.arccosh(np.maximum(z, 1.0))


def rho0_pairwise(points: np.ndarray) -> np.ndarray:
    """Pairwise values of the comparison gauge for an (n, 2) array."""
    p = np.asarray(points, dtype=float)
    m = np.minimum.outer(p[:, 1], p[:, 1])
    g1 = np.log1p(np.abs(p[:, 0, None] - p[None, :, 0]) / m)
    g2 = np.log1p(np.abs(p[:, 1, None] - p[None, :, 1]) / m)
    return np.maximum(g1, g2)


@dataclass(frozen=True)
class Lattice:
    """Center set whose R/2-balls cover the space while cR-balls stay disjoint."""

    space: FiniteMetricSpace
    centers: tuple
    radius: float
    packing: float

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(int(c) for c in self.centers))


def build_r_lattice(space: FiniteMetricSpace, R: float) -> Lattice:
    """Greedy maximal R/2-separated subset, scanned in index order.

    The greedy rule makes runs reproducible; maximality gives the open-ball
    cover, separation gives the packing constant (capped at 1/4).
    """
    if not R > 0:
        raise ValueError("R must be positive")
    centers: list = []
    for i in range(space.n):
        if all(space.dist[i, c] >= R / 2 for c in centers):
            centers.append(i)
    # cover check: every point strictly within R/2 of some center
    cov = space.dist[:, centers].min(axis=1) if centers else np.array([np.inf])
    if space.n and np.any(cov >= R / 2):
        # cannot occur for a greedy maximal packing
        raise CoverFailureError("greedy centers fail to cover the space")
    if len(centers) > 1:
        idx = np.array(centers)
        sub = space.dist[np.ix_(idx, idx)]
        sep = sub[np.triu_indices(len(centers), k=1)].min()
        packing = min(0.25, float(sep) / (2.0 * R))
    else:
        packing = 0.25
    return Lattice(space, tuple(centers), float(R), packing)
