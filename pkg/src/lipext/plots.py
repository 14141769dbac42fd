"""Figure rendering for the CLI report paths (matplotlib, file output only)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .tree_embed import embed_edge_point  # noqa: E402


def render_embedding(tree, frames, points, path: str, segments: int = 16):
    """Draw the embedded tree: squares, geodesic edges and vertex centers."""
    fig, ax = plt.subplots(figsize=(8, 6))
    for f in frames:
        c1, c2 = f.center
        h = f.side / 2.0
        ax.add_patch(plt.Rectangle((c1 - h, c2 - h), f.side, f.side,
                                   fill=False, ec="0.7", lw=0.5))
    for v in range(tree.n):
        if tree.parent[v] is None:
            continue
        ts = np.linspace(0.0, 1.0, max(segments, 2))
        arc = np.array([embed_edge_point(tree, frames, v, t) for t in ts])
        ax.plot(arc[:, 0], arc[:, 1], color="C0", lw=0.8)
    ax.plot(points[:, 0], points[:, 1], "o", color="C3", ms=3)
    ax.set_yscale("log")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2 (log scale)")
    ax.set_title("tree embedded in the upper half-plane")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_curve(xs, ys, xlabel: str, ylabel: str, title: str, path: str):
    """Single-curve summary figure for experiment sweeps."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, "o-", color="C0")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
