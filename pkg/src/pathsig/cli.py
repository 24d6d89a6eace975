"""Batch command-line frontend.

Every subcommand reads CSV paths and/or JSON inputs, writes one JSON
document to stdout, and exits 0 on success, 2 on a validation problem
(bad flags, malformed input files, with a line/column diagnostic for
CSV/JSON), and 1 on an internal error.  Floats are serialised with 17
significant digits, so output is byte-identical for identical inputs and
seeds, and values round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import functionals, lift, reduction, rtree, signature, tensor_algebra
from .paths import CsvFormatError, PolyPath, p_variation, read_path_csv, write_path_csv

__all__ = ["main", "run"]


class ValidationError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic JSON with 17 significant digits

def _format_json(obj):
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_format_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_format_json(v) for v in obj) + "]"
    if isinstance(obj, np.floating):
        return format(float(obj), ".17g")
    raise TypeError(f"cannot serialise {type(obj)!r}")


def _emit(obj, stream):
    stream.write(_format_json(obj))
    stream.write("\n")


def _path_json(path):
    return {
        "dim": path.dim,
        "vertices": [[float(c) for c in row] for row in path.vertices],
    }


def _load_path(filename):
    try:
        return read_path_csv(filename)
    except FileNotFoundError:
        raise ValidationError(f"{filename}: no such file") from None
    except CsvFormatError as e:
        raise ValidationError(f"{filename}: {e}") from None


def _load_form(spec):
    text = spec.strip()
    if not text.startswith(("[", "{")):
        try:
            with open(spec) as fh:
                text = fh.read()
        except FileNotFoundError:
            raise ValidationError(f"{spec}: no such file") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"form JSON: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if isinstance(obj, dict):
        obj = obj.get("terms", [obj])
    try:
        return functionals.Polynomial1Form.from_json_obj(obj)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"form JSON: {e}") from None


# ---------------------------------------------------------------------------
# subcommands

def _cmd_sig(args, out):
    path = _load_path(args.path)
    g = signature.sig(path, args.depth)
    _emit(tensor_algebra.to_json_obj(g), out)


def _cmd_logsig(args, out):
    path = _load_path(args.path)
    g = signature.logsig(path, args.depth)
    _emit(tensor_algebra.to_json_obj(g), out)


def _cmd_reduce(args, out):
    path = _load_path(args.path)
    reduced = reduction.reduce(path).inner
    if args.out:
        write_path_csv(reduced, args.out)
    _emit(_path_json(reduced), out)


def _cmd_is_treelike(args, out):
    path = _load_path(args.path)
    tree_like = reduction.is_tree_like(path)
    witness = None
    if not tree_like:
        g = signature.sig(path, args.depth)
        witness = signature.distinguishing_level(
            g, tensor_algebra.unit(path.dim, args.depth), tol=args.tol
        )
    _emit({"tree_like": tree_like, "witness_level": witness}, out)


def _cmd_gen_treelike(args, out):
    path = reduction.sample_tree_like(args.seed, args.moves, args.dim)
    if args.out:
        write_path_csv(path, args.out)
    _emit(_path_json(path), out)


def _cmd_compare(args, out):
    x = _load_path(args.path_a)
    y = _load_path(args.path_b)
    if x.dim != y.dim:
        raise ValidationError(f"paths have different dimensions {x.dim} vs {y.dim}")
    gx = signature.sig(x, args.depth)
    gy = signature.sig(y, args.depth)
    _emit(
        {"distinguishing_level": signature.distinguishing_level(gx, gy, tol=args.tol)},
        out,
    )


def _cmd_lift(args, out):
    path = _load_path(args.path)
    g = lift.lift_signature(path, args.depth, args.level)
    gs = lift.GradedSpace(path.dim, args.depth)
    blocks = {}
    for n in range(1, args.level + 1):
        for profile in gs.profiles(n):
            key = "(" + ",".join(str(i) for i in profile) + ")"
            blocks[key] = [float(c) for c in gs.block_extract(g.levels[n], profile)]
    _emit(
        {"dim": path.dim, "truncation": args.depth, "level": args.level, "blocks": blocks},
        out,
    )


def _cmd_integrate(args, out):
    path = _load_path(args.path)
    form = _load_form(args.form)
    if form.dim != path.dim:
        raise ValidationError(f"form dim {form.dim} does not match path dim {path.dim}")
    depth = args.depth if args.depth is not None else form.degree() + 1
    functional = functionals.form_to_functional(form, depth)
    pairing = tensor_algebra.evaluate(signature.sig(path.based_at_origin(), depth), functional)
    quad = functionals.integrate_numeric(form, path, args.mesh)
    _emit(
        {
            "integral": float(pairing),
            "quadrature": float(quad),
            "abs_difference": abs(float(pairing) - float(quad)),
            "depth": depth,
            "mesh": args.mesh,
        },
        out,
    )


def _cmd_tree_dist(args, out):
    a = rtree.TreePoint.rooted(_load_path(args.path_a))
    b = rtree.TreePoint.rooted(_load_path(args.path_b))
    _emit({"distance": float(rtree.tree_distance(a, b, args.p)), "p": args.p}, out)


def _cmd_four_point(args, out):
    points = rtree.sample_rational_forest(args.seed, n_points=args.prefixes)
    report = rtree.four_point_report(points, p=1)
    _emit(
        {
            "prefixes": report.n_points,
            "checks": report.n_checked,
            "violations": len(report.violations),
            "exact": report.exact,
            "seed": args.seed,
        },
        out,
    )


def _cmd_factorize(args, out):
    path = _load_path(args.path)
    try:
        fact = rtree.tree_factorization(path)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    _emit(
        {
            "heights": [float(h) for h in fact.heights],
            "psi_check": fact.psi_check,
        },
        out,
    )


def _cmd_pvar(args, out):
    path = _load_path(args.path)
    value = p_variation(list(path.vertices), args.p)
    _emit({"p_variation": float(value), "p": args.p}, out)


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pathsig",
        description="Signatures, reduction, lifts, and tree metrics of piecewise-linear paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("sig", _cmd_sig, help="truncated signature of a CSV path")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=4)

    p = add("logsig", _cmd_logsig, help="log-signature of a CSV path")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=4)

    p = add("reduce", _cmd_reduce, help="backtrack-free reduced path")
    p.add_argument("path")
    p.add_argument("--out", help="also write the reduced path as CSV")

    p = add("is-treelike", _cmd_is_treelike, help="does the path reduce to a point?")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("gen-treelike", _cmd_gen_treelike, help="random tree-like path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--moves", type=int, default=10)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--out", help="also write the path as CSV")

    p = add("compare", _cmd_compare, help="first level at which two signatures differ")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("lift", _cmd_lift, help="graded signature of the signature path")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=2, help="signature truncation N")
    p.add_argument("--level", type=int, default=2, help="lift level M")

    p = add("integrate", _cmd_integrate, help="polynomial 1-form along a path")
    p.add_argument("path")
    p.add_argument("--form", required=True, help="JSON file or inline JSON term list")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--mesh", type=int, default=4096)

    p = add("tree-dist", _cmd_tree_dist, help="tree distance of two reduced paths")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--p", type=float, default=1.0)

    p = add("four-point", _cmd_four_point, help="exact four-point certificate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prefixes", type=int, default=12)

    p = add("factorize", _cmd_factorize, help="tree factorization of a tree-like path")
    p.add_argument("path")

    p = add("pvar", _cmd_pvar, help="p-variation of the vertex sequence")
    p.add_argument("path")
    p.add_argument("--p", type=float, default=1.0)

    return parser


def run(argv, out=None):
    """Parse and execute; returns the process exit status."""
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        args.fn(args, out)
        return 0
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # internal failure
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    raise SystemExit(run(sys.argv[1:]))
