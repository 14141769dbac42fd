"""Canned desk-scale experiments behind the CLI `experiment` subcommand."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ConfigError
from .lambda_lp import optimal_lambda
from .metric import FiniteMetricSpace
from .operators import averaging_operator, operator_norm
from .spaces import grid_l1, truncated_tk
from .tree_embed import distortion_report


def line_space(h: float, lo: float = -1.0, hi: float = 1.0) -> FiniteMetricSpace:
    """Uniform grid on [lo, hi] with step h, metric |x - y|."""
    count = int(round((hi - lo) / h)) + 1
    xs = lo + h * np.arange(count)
    dist = np.abs(xs[:, None] - xs[None, :])
    return FiniteMetricSpace(tuple(round(float(x), 12) for x in xs), dist)


def grid_corners(space: FiniteMetricSpace, n: int, l: int) -> list:
    """Indices of the 2^n extreme vertices of the grid."""
    want = {tuple(s * l for s in signs)
            for signs in itertools.product((-1, 1), repeat=n)}
    return [i for i, lab in enumerate(space.labels) if tuple(lab) in want]


def run_lambda_vs_grid_size(params: dict):
    n = int(params.get("n", 2))
    l_values = [int(x) for x in params.get("l_values", [1, 2])]
    header = ["l", "points", "subset_size", "lambda"]
    rows = []
    for l in l_values:
        space = grid_l1(n, l)
        corners = grid_corners(space, n, l)
        res = optimal_lambda(space, corners)
        rows.append([l, space.n, len(corners), res.value])
    plot = ("l", "lambda", "optimal extension constant vs grid halfwidth",
            [r[0] for r in rows], [r[3] for r in rows])
    return header, rows, plot, True


def run_averaging_norm_vs_resolution(params: dict):
    h_values = [float(x) for x in params.get("h_values", [0.1, 0.05, 0.02])]
    header = ["h", "points", "op_norm"]
    rows = []
    for h in h_values:
        space = line_space(h)
        op = averaging_operator(space, [0, space.n - 1])
        rows.append([h, space.n, operator_norm(op)])
    plot = ("h", "operator norm", "averaging operator norm vs grid step",
            [r[0] for r in rows], [r[2] for r in rows])
    return header, rows, plot, True


def run_tree_distortion_vs_depth(params: dict):
    k = int(params.get("k", 2))
    depths = [int(d) for d in params.get("depths", [1, 2, 3, 4])]
    header = ["depth", "vertices", "metric", "min_ratio", "max_ratio", "bound_ok"]
    rows = []
    all_ok = True
    for depth in depths:
        tree = truncated_tk(k, depth)
        for metric in ("rho0", "rho"):
            rep = distortion_report(tree, metric=metric)
            rows.append([depth, tree.n, metric, rep.min_ratio, rep.max_ratio,
                         int(rep.bounds_ok)])
            all_ok = all_ok and rep.bounds_ok
    r0 = [r for r in rows if r[2] == "rho0"]
    plot = ("depth", "max ratio (rho0)", f"tree distortion vs depth, k={k}",
            [r[0] for r in r0], [r[4] for r in r0])
    return header, rows, plot, all_ok


EXPERIMENTS = {
    "lambda-vs-grid-size": run_lambda_vs_grid_size,
    "averaging-norm-vs-resolution": run_averaging_norm_vs_resolution,
    "tree-distortion-vs-depth": run_tree_distortion_vs_depth,
}


def run_experiment(config: dict):
    """Dispatch a config dict; returns (header, rows, plot spec, bounds ok)."""
    name = config.get("name")
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; "
                          f"choose from {sorted(EXPERIMENTS)}")
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    return EXPERIMENTS[name](params)
