"""Command-line front door.

Subcommands: validate, lambda, extend, embed, experiment.
Exit codes: 0 success, 1 validation or bound violation, 2 usage,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io as lio
from .errors import (
    ConfigError,
    EnumerationTooLargeError,
    LipextError,
    LPSizeError,
    MetricValidationError,
    ProductTooLargeError,
)
from .experiments import run_experiment
from .lambda_lp import lambda_of_space, optimal_lambda, optimal_lambda_nonneg
from .metric import check_metric, lipschitz_seminorm
from .operators import (
    Ball,
    Box,
    HalfspaceIntersection,
    averaging_operator,
    mcshane_extend,
    metric_projection_extend,
    operator_norm,
    whitney_operator,
)
from .spaces import build_r_lattice
from .tree_embed import distortion_report, embed_edge_point, embed_tree

CAP_ERRORS = (ProductTooLargeError, LPSizeError, EnumerationTooLargeError)


def _threads(args) -> int:
    if args.threads:
        return args.threads
    env = os.environ.get("LIPEXT_THREADS")
    return int(env) if env else 1


def _parse_subset(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ConfigError(f"bad subset spec {text!r}; expected comma-separated indices")


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _emit_csv(out_path, comments, header, rows):
    fh, close = _open_out(out_path)
    try:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(
                lio.format_float(x) if isinstance(x, float) else str(x)
                for x in row) + "\n")
    finally:
        if close:
            fh.close()


def cmd_validate(args) -> int:
    with open(args.input) as fh:
        obj = json.load(fh)
    if "matrix" in obj:
        violations = check_metric(obj["matrix"])
        if violations:
            for v in violations:
                print(f"violation: {v}")
            return 1
        n = len(obj["matrix"])
    else:
        space = lio.space_from_json(obj)  # generators are valid by construction
        n = space.n
    print(f"valid metric space with {n} points")
    return 0


def cmd_lambda(args) -> int:
    space = lio.load_space(args.input)
    if args.enumerate:
        value, worst = lambda_of_space(space, args.max_subset, threads=_threads(args))
        result = optimal_lambda(space, worst)
        out = result.to_json()
        out["enumerated"] = True
    else:
        subset = _parse_subset(args.subset) if args.subset else list(range(space.n))
        solver = optimal_lambda_nonneg if args.nonneg else optimal_lambda
        result = solver(space, subset)
        out = result.to_json()
    print(json.dumps(out))
    return 0


def _load_function(path, count):
    with open(path) as fh:
        vals = json.load(fh)
    vals = np.asarray(vals, dtype=float)
    if vals.shape != (count,):
        raise ConfigError(f"function file must hold {count} values, got {vals.shape}")
    return vals


def _body_from_json(obj):
    kind = obj.get("type")
    if kind == "box":
        return Box(tuple(obj["lo"]), tuple(obj["hi"]))
    if kind == "ball":
        return Ball(tuple(obj["center"]), float(obj["radius"]))
    if kind == "halfspaces":
        return HalfspaceIntersection(tuple(map(tuple, obj["A"])),
                                     tuple(obj["b"]))
    raise ConfigError(f"unknown body type {kind!r}")


def cmd_extend(args) -> int:
    if args.method == "projection":
        with open(args.input) as fh:
            obj = json.load(fh)
        sample = np.asarray(obj["sample"], dtype=float)
        query = np.asarray(obj["query"], dtype=float)
        f = _load_function(args.function, len(sample))
        body = _body_from_json(obj["body"])
        vals = metric_projection_extend(f, sample, body, query)
        rows = [[f"q{i}", float(v)] for i, v in enumerate(vals)]
        _emit_csv(args.out, ["method=projection"], ["label", "value"], rows)
        return 0

    space = lio.load_space(args.input)
    if args.method == "whitney":
        if args.radius is None:
            raise ConfigError("--radius is required for the whitney method")
        lat = build_r_lattice(space, args.radius)
        subset = list(lat.centers)
        f = _load_function(args.function, len(subset))
        op = whitney_operator(lat)
        ext = op.apply(f)
        norms = {"op_norm": operator_norm(op)}
    else:
        if not args.subset:
            raise ConfigError("--subset is required for this method")
        subset = _parse_subset(args.subset)
        f = _load_function(args.function, len(subset))
        if args.method == "mcshane":
            sub = space.subspace(subset)
            ext = mcshane_extend(f, sub).values
            norms = {}
        else:  # average
            op = averaging_operator(space, subset)
            ext = op.apply(f)
            norms = {"op_norm": operator_norm(op)}

    # extension property is verified before anything is written
    err = max(abs(float(ext[s]) - float(fv)) for s, fv in zip(subset, f))
    if err > 1e-9:
        print(f"extension property violated: max error {err:.3e}", file=sys.stderr)
        return 1
    sub = space.subspace(subset)
    comments = [f"method={args.method}",
                f"input_seminorm={lio.format_float(lipschitz_seminorm(f, sub))}",
                f"output_seminorm={lio.format_float(lipschitz_seminorm(ext, space))}"]
    for k, v in norms.items():
        comments.append(f"{k}={lio.format_float(v)}")
    rows = [[str(space.labels[i]).replace(",", ";"), float(ext[i])]
            for i in range(space.n)]
    _emit_csv(args.out, comments, ["label", "value"], rows)
    return 0


def cmd_embed(args) -> int:
    from .spaces import truncated_tk

    tree = truncated_tk(args.k, args.depth)
    _, frames, pts = embed_tree(tree)
    rows = [[str(tree.labels[v]), float(pts[v, 0]), float(pts[v, 1])]
            for v in range(tree.n)]
    if args.segments:
        for v in range(tree.n):
            if tree.parent[v] is None:
                continue
            for i in range(1, args.segments):
                t = i / args.segments
                x1, x2 = embed_edge_point(tree, frames, v, t)
                rows.append([f"edge:{tree.labels[v]}:{t:.6g}", float(x1), float(x2)])
    rep = distortion_report(tree, metric=args.metric)
    summary = {"metric": rep.metric, "min_ratio": rep.min_ratio,
               "max_ratio": rep.max_ratio, "pairs": rep.pair_count,
               "log_n": math.log(rep.n), "bounds_ok": rep.bounds_ok,
               "edge_rho0_max_err": rep.edge_rho0_max_err}
    _emit_csv(args.out, [], ["vertex_label", "x1", "x2"], rows)
    report_stream = sys.stdout if args.out not in (None, "-") else sys.stderr
    print(json.dumps(summary), file=report_stream)
    if args.plot:
        from .plots import render_embedding
        render_embedding(tree, frames, pts, args.plot,
                         segments=max(args.segments, 8))
    return 0 if rep.bounds_ok else 1


def cmd_experiment(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    header, rows, plot, ok = run_experiment(config)
    out = args.out or config.get("out")
    _emit_csv(out, [f"experiment={config.get('name')}",
                    f"seed={config.get('seed', 0)}"], header, rows)
    if args.plot:
        from .plots import render_curve
        xlabel, ylabel, title, xs, ys = plot
        render_curve(xs, ys, xlabel, ylabel, title, args.plot)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lipext",
                                 description="Lipschitz extension constants, "
                                             "free-space norms and tree embeddings")
    ap.add_argument("--threads", type=int, default=0,
                    help="worker cap (or env LIPEXT_THREADS)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a metric space file")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lambda", help="optimal extension constant")
    p.add_argument("input")
    p.add_argument("--subset", help="comma-separated source indices")
    p.add_argument("--nonneg", action="store_true",
                   help="restrict to nonnegative weights")
    p.add_argument("--enumerate", action="store_true",
                   help="maximize over all proper subsets")
    p.add_argument("--max-subset", type=int, default=None)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("extend", help="run an extension operator")
    p.add_argument("input")
    p.add_argument("--method", required=True,
                   choices=["mcshane", "average", "whitney", "projection"])
    p.add_argument("--function", required=True,
                   help="JSON list of values on the source set")
    p.add_argument("--subset")
    p.add_argument("--radius", type=float, help="lattice radius for whitney")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("embed", help="embed a truncated uniform tree")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--metric", choices=["rho", "rho0"], default="rho0")
    p.add_argument("--segments", type=int, default=0,
                   help="edge polyline samples per edge")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--plot", help="also render a PNG figure to this path")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("experiment", help="run a canned experiment config")
    p.add_argument("config")
    p.add_argument("--out", help="CSV output path (overrides config)")
    p.add_argument("--plot", help="also render a PNG figure to this path")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CAP_ERRORS as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except MetricValidationError as exc:
        print(f"invalid metric: {exc}", file=sys.stderr)
        return 1
    except LipextError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
