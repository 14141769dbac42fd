"""JSON input formats for spaces and trees, and serialization helpers.

Space files are either explicit ({"labels": [...], "matrix": [[...]]}) or
generator specs: {"gen": "grid_l1", "n": 2, "l": 3}, {"gen": "tree", ...},
{"gen": "tk", "k": 2, "depth": 3}, {"gen": "p_sum", "p": 1, "parts": [...]}.
"""

from __future__ import annotations

import json

from .errors import ConfigError
from .metric import FiniteMetricSpace, direct_p_sum, validate_metric
from .spaces import RootedTree, grid_l1, tree_metric_space, truncated_tk


def tree_from_json(obj: dict) -> RootedTree:
    gen = obj.get("gen")
    if gen == "tk":
        return truncated_tk(int(obj["k"]), int(obj["depth"]))
    if gen == "tree":
        parents = [None if p is None else int(p) for p in obj["parents"]]
        edge_len = [0.0 if e is None else float(e) for e in obj["edge_len"]]
        labels = obj.get("labels") or [f"v{i}" for i in range(len(parents))]
        return RootedTree(tuple(parents), tuple(edge_len), tuple(labels))
    raise ConfigError(f"not a tree spec: gen={gen!r}")


def space_from_json(obj: dict) -> FiniteMetricSpace:
    if "matrix" in obj:
        labels = obj.get("labels")
        return validate_metric(obj["matrix"], labels=labels)
    gen = obj.get("gen")
    if gen == "grid_l1":
        return grid_l1(int(obj["n"]), int(obj["l"]))
    if gen in ("tree", "tk"):
        return tree_metric_space(tree_from_json(obj))
    if gen == "p_sum":
        p = float("inf") if obj["p"] in ("inf", "Infinity") else float(obj["p"])
        parts = [space_from_json(part) for part in obj["parts"]]
        return direct_p_sum(parts, p)
    raise ConfigError(f"unknown space spec: gen={gen!r}")


def load_space(path: str) -> FiniteMetricSpace:
    with open(path) as fh:
        return space_from_json(json.load(fh))


def load_tree(path: str) -> RootedTree:
    with open(path) as fh:
        return tree_from_json(json.load(fh))


def format_float(x: float) -> str:
    """Round-trip-exact decimal rendering used in all CSV output."""
    return format(float(x), ".17g")
