"""Command-line front end.

Exit codes: 0 on success, 2 for malformed input or arguments, 3 when a
series would exceed the coefficient cap.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .exceptions import LoopsigError, ResourceCapError
from .free_lie import log_signature_coords
from .holonomy import PROFILES, fr_xi_report, lift_truncated
from .paths import (
    EdgePath,
    PiecewiseLinearPath,
    geometric_retrace_reduce,
    is_tree_like_edge_path,
    retrace_reduce,
)
from .signature import DEFAULT_DEPTH, first_difference, path_signature, signature_distance
from .tensor_algebra import DEFAULT_CAP, word_str

EXIT_OK, EXIT_INPUT, EXIT_CAP = 0, 2, 3


class InputError(LoopsigError):
    pass


def _read_text(name: str) -> str:
    if name == "-":
        return sys.stdin.read()
    try:
        return Path(name).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {name}: {exc.strerror}") from exc


def read_path(name: str) -> PiecewiseLinearPath:
    text = _read_text(name)
    if name.endswith(".csv"):
        return PiecewiseLinearPath.from_csv(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        if name == "-":
            return PiecewiseLinearPath.from_csv(text)
        raise InputError(f"{name} is not valid JSON: {exc}") from exc
    return PiecewiseLinearPath.from_dict(data)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_sig(args) -> int:
    path = read_path(args.path)
    sig = path_signature(path, args.depth, cap=args.cap)
    if args.format == "csv":
        sys.stdout.write(fr_xi_report(sig, args.xi or [1.0], path.length()).to_csv())
    else:
        _emit(sig.to_dict())
    return EXIT_OK


def cmd_logsig(args) -> int:
    path = read_path(args.path)
    _emit(log_signature_coords(path_signature(path, args.depth, cap=args.cap)).to_dict())
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = read_path(args.path_a), read_path(args.path_b)
    if a.dimension != b.dimension:
        raise InputError(f"dimensions differ: {a.dimension} vs {b.dimension}")
    xi = args.xi[0] if args.xi else 1.0
    sa = path_signature(a, args.depth, cap=args.cap)
    sb = path_signature(b, args.depth, cap=args.cap)
    witness = first_difference(sa, sb, args.tol)
    _emit({
        "depth": args.depth,
        "xi": xi,
        "distance": signature_distance(sa, sb, xi),
        "verdict": "distinct" if witness is not None else f"indistinguishable at depth {args.depth}",
        "witness": None if witness is None else word_str(witness),
    })
    return EXIT_OK


def cmd_holcheck(args) -> int:
    path = read_path(args.path)
    steps = args.steps or [32, 64, 128]
    if any(s < 1 for s in steps):
        raise InputError("steps must be >= 1")
    sig = path_signature(path, args.depth, cap=args.cap)
    table = []
    for s in steps:
        lift = lift_truncated(path, args.depth, s, args.profile, args.cap)
        table.append({"steps": s, "distance": signature_distance(lift, sig), "order": None})
    for prev, row in zip(table, table[1:]):
        if prev["distance"] > 0 and row["distance"] > 0:
            row["order"] = math.log(prev["distance"] / row["distance"]) / math.log(
                row["steps"] / prev["steps"])
    _emit({"depth": args.depth, "profile": args.profile, "table": table,
           "distance": table[-1]["distance"]})
    return EXIT_OK


def cmd_reduce(args) -> int:
    if args.word is not None:
        w = EdgePath.parse(args.word)
        _emit({"reduced": str(retrace_reduce(w)), "tree_like": is_tree_like_edge_path(w)})
        return EXIT_OK
    if args.path is None:
        raise InputError("give either --word or a path file")
    reduced = geometric_retrace_reduce(read_path(args.path), args.tol)
    out = reduced.to_dict()
    out["constant"] = reduced.is_constant()
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopsig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=1e-9):
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="truncation depth m")
        p.add_argument("--xi", type=float, action="append", help="xi weight (repeatable)")
        p.add_argument("--tol", type=float, default=tol)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max coefficients per series")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("sig", help="truncated signature of a path")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_sig)

    p = sub.add_parser("logsig", help="log-signature in the Lyndon basis")
    p.add_argument("path")
    common(p)
    p.set_defaults(func=cmd_logsig)

    p = sub.add_parser("compare", help="compare two paths by signature")
    p.add_argument("path_a")
    p.add_argument("path_b")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("holcheck", help="holonomy ODE against the exact signature")
    p.add_argument("path")
    common(p)
    p.add_argument("--steps", type=int, action="append", help="RK4 steps per segment (repeatable)")
    p.add_argument("--profile", choices=PROFILES, default="smooth")
    p.set_defaults(func=cmd_holcheck)

    p = sub.add_parser("reduce", help="retrace-reduce an edge word or a path")
    p.add_argument("path", nargs="?")
    p.add_argument("--word", help="edge word, inverses marked with a trailing apostrophe")
    common(p, tol=0.0)
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.depth < 0 or args.tol < 0:
        print("loopsig: depth and tol must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    if args.xi and any(x <= 0 for x in args.xi):
        print("loopsig: xi must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"loopsig: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (LoopsigError, ValueError, KeyError, TypeError) as exc:
        print(f"loopsig: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
