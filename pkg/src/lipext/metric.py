"""Finite metric spaces, pointed subspaces, scalar fields and Lipschitz seminorms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptySourceError,
    MetricValidationError,
    NonpositiveScaleError,
    ProductTooLargeError,
)

DEFAULT_TOL = 1e-9
DEFAULT_PRODUCT_CAP = 4096


@dataclass(frozen=True)
class Violation:
    """One violated metric axiom, with the witnessing indices."""

    kind: str  # asymmetry | negative | diagonal | triangle | duplicate
    indices: tuple

    def __str__(self):
        return f"{self.kind}{self.indices}"


def check_metric(matrix, tol: float = DEFAULT_TOL) -> list[Violation]:
    """Return all metric-axiom violations of a square matrix (empty list if valid)."""
    d = np.asarray(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {d.shape}")
    n = d.shape[0]
    out: list[Violation] = []
    for i in range(n):
        if abs(d[i, i]) > tol:
            out.append(Violation("diagonal", (i,)))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j] - d[j, i]) > tol:
                out.append(Violation("asymmetry", (i, j)))
            if d[i, j] < -tol:
                out.append(Violation("negative", (i, j)))
            elif abs(d[i, j]) <= tol:
                out.append(Violation("duplicate", (i, j)))
    # d(i,k) <= d(i,j) + d(j,k); vectorized scan, indices recovered only on failure
    relaxed = np.min(d[:, :, None] + d[None, :, :], axis=1)  # min_j d(i,j)+d(j,k)
    if np.any(d > relaxed + tol):
        for i, k in zip(*np.nonzero(d > relaxed + tol)):
            j = int(np.argmin(d[i, :] + d[:, k]))
            out.append(Violation("triangle", (int(i), j, int(k))))
    return out


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite metric space: point labels plus a symmetric distance matrix.

    Immutable after construction; the matrix is copied and marked read-only.
    """

    labels: tuple
    dist: np.ndarray

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != d.shape[0]:
            raise ValueError("labels and matrix size differ")

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, i: int, j: int) -> float:
        return float(self.dist[i, j])

    @property
    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def subspace(self, indices, basepoint: int | None = None) -> "PointedSubspace":
        indices = tuple(int(i) for i in indices)
        if not indices:
            raise EmptySourceError("a pointed subspace needs at least one point")
        if basepoint is None:
            basepoint = indices[0]
        return PointedSubspace(self, indices, int(basepoint))

    def as_pointed(self, basepoint: int = 0) -> "PointedSubspace":
        return self.subspace(range(self.n), basepoint)


def validate_metric(matrix, labels=None, tol: float = DEFAULT_TOL) -> FiniteMetricSpace:
    """Validate the four metric axioms and build a space, or raise with the full report."""
    d = np.asarray(matrix, dtype=float)
    violations = check_metric(d, tol)
    if violations:
        raise MetricValidationError(violations)
    if labels is None:
        labels = tuple(range(d.shape[0]))
    return FiniteMetricSpace(labels, d)


@dataclass(frozen=True)
class PointedSubspace:
    """An ordered index subset S of a parent space, with a basepoint m* in S."""

    parent: FiniteMetricSpace
    indices: tuple
    basepoint: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("subspace indices must be distinct")
        if any(i < 0 or i >= self.parent.n for i in self.indices):
            raise ValueError("subspace index out of range")
        if self.basepoint not in self.indices:
            raise ValueError("basepoint must belong to the subspace")

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def base_pos(self) -> int:
        return self.indices.index(self.basepoint)

    @property
    def dist(self) -> np.ndarray:
        idx = np.array(self.indices)
        return self.parent.dist[np.ix_(idx, idx)]

    @property
    def labels(self) -> tuple:
        return tuple(self.parent.labels[i] for i in self.indices)

    def as_space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.labels, self.dist)


@dataclass(frozen=True)
class ScalarField:
    """Real values attached to the points of a space or pointed subspace."""

    space: object  # FiniteMetricSpace or PointedSubspace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.shape != (self.space.n,):
            raise ValueError("value count does not match the space")

    def shifted_to_zero(self) -> "ScalarField":
        """Subtract the basepoint value (Lip0 normalization)."""
        pos = self.space.base_pos if isinstance(self.space, PointedSubspace) else 0
        return ScalarField(self.space, self.values - self.values[pos])


def _dist_of(space) -> np.ndarray:
    return space.dist if isinstance(space, (FiniteMetricSpace, PointedSubspace)) else np.asarray(space)


def lipschitz_seminorm(values, space) -> float:
    """max over pairs of |f(m')-f(m'')| / d(m',m''); 0 on a single point by convention."""
    if isinstance(values, ScalarField):
        values = values.values
    f = np.asarray(values, dtype=float)
    d = _dist_of(space)
    n = d.shape[0]
    if n < 2:
        return 0.0
    diffs = np.abs(f[:, None] - f[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(d > 0, diffs / np.where(d > 0, d, 1.0), 0.0)
    return float(ratios.max())


def direct_p_sum(spaces, p, cap: int = DEFAULT_PRODUCT_CAP) -> FiniteMetricSpace:
    """Direct p-sum: Cartesian product with d = (sum d_i^p)^(1/p), max metric at p=inf."""
    spaces = list(spaces)
    if not spaces:
        raise ValueError("need at least one space")
    total = 1
    for s in spaces:
        total *= s.n
        if total > cap:
            raise ProductTooLargeError(f"product size exceeds cap {cap}")
    p = float(p)
    if p < 1:
        raise ValueError("p must be in [1, inf]")

    def combine(d1, d2):
        if np.isinf(p):
            out = np.maximum(d1[:, None, :, None], d2[None, :, None, :])
        else:
            out = (d1[:, None, :, None] ** p + d2[None, :, None, :] ** p) ** (1.0 / p)
        m = d1.shape[0] * d2.shape[0]
        return out.reshape(m, m)

    dist = spaces[0].dist
    labels = [(l,) for l in spaces[0].labels]
    for s in spaces[1:]:
        dist = combine(dist, s.dist)
        labels = [la + (lb,) for la in labels for lb in s.labels]
    return FiniteMetricSpace(tuple(labels), dist)


def scale_metric(space: FiniteMetricSpace, c: float) -> FiniteMetricSpace:
    """Dilate every distance by c > 0."""
    if not c > 0:
        raise NonpositiveScaleError(f"scale must be positive, got {c}")
    return FiniteMetricSpace(space.labels, c * space.dist)


def permute_space(space: FiniteMetricSpace, perm) -> FiniteMetricSpace:
    """Relabel points by a permutation: new point i is old point perm[i]."""
    perm = np.asarray(perm, dtype=int)
    labels = tuple(space.labels[i] for i in perm)
    return FiniteMetricSpace(labels, space.dist[np.ix_(perm, perm)])
