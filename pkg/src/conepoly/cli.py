"""Command-line harness.

Exit codes: 0 success, 1 usage error, 2 a checked identity or conjectured
value failed (a machine-readable record goes to stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .geometry import DEFAULT_BOUND, GeometryError, PointConfiguration, is_generic, moment_points, random_points
from .linalg import rank_exact
from .spans import (
    CLOSED_FORM_DMAX,
    EXACT_RANK_DMAX,
    InvariantViolationError,
    ambient_dimension,
    apply_point_functional,
    build_M,
    expected_dimension,
    lemma2_witness,
    sample_cone_polynomials,
    span_dimension,
    vanishing_dimension,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

CONJECTURE_COLUMNS = ["d", "vanishing", "computed", "conjectured", "match", "certified"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _render(payload: dict, fmt: str, rows_key: str | None = None, columns=None) -> str:
    payload = _jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    rows = payload[rows_key] if rows_key else [payload]
    if fmt == "csv":
        columns = columns or sorted(rows[0]) if rows else columns
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buf.getvalue()
    lines = []
    if rows_key:
        header = {k: v for k, v in payload.items() if k != rows_key}
        lines.append(" ".join(f"{k}={v}" for k, v in sorted(header.items())))
        cols = columns or sorted(rows[0])
        lines.append("  ".join(f"{c:>11}" for c in cols))
        for row in rows:
            lines.append("  ".join(f"{str(row[c]):>11}" for c in cols))
    else:
        width = max(len(k) for k in payload)
        lines.extend(f"{k:<{width}}  {v}" for k, v in sorted(payload.items()))
    return "\n".join(lines) + "\n"


def _emit(args, payload, rows_key=None, columns=None) -> None:
    text = _render(payload, args.format, rows_key, columns)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _violation(command: str, **details) -> int:
    record = {"violation": command, **_jsonable(details)}
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return EXIT_VIOLATION


def _configuration(args, d: int) -> PointConfiguration:
    if getattr(args, "points", None):
        S = PointConfiguration.from_json(Path(args.points).read_text())
        if S.d != d:
            raise UsageError(f"--points file has {S.d} points but --d is {d}")
        return S
    if getattr(args, "moment", False):
        return moment_points(d, args.n)
    return random_points(d, args.n, seed=args.seed, bound=args.bound)


def _config_label(args) -> str:
    if getattr(args, "points", None):
        return "file"
    return "moment" if getattr(args, "moment", False) else "random"


def _method(args) -> str:
    method = {"m-matrix": "m_matrix", "coeff": "coefficient_extraction"}.get(args.method, args.method)
    if method is None:
        method = "m_matrix" if args.n == 2 else "sampling"
    if method == "m_matrix" and args.n != 2:
        raise UsageError("--method m-matrix needs --n 2")
    return method


# -- commands ---------------------------------------------------------------------


def cmd_dim(args) -> int:
    S = _configuration(args, args.d)
    report = span_dimension(S, method=_method(args), field=args.field, seed=args.seed, bound=args.bound)
    payload = report.to_dict()
    payload["configuration"] = _config_label(args)
    payload["seed"] = args.seed
    payload["field"] = args.field
    _emit(args, payload)
    if report.dimension > ambient_dimension(S.n, S.d) - S.d:
        return _violation("dim", reason="dimension exceeds the vanishing space", **report.to_dict())
    return EXIT_OK


def cmd_conjecture(args) -> int:
    if not 2 <= args.dmax:
        raise UsageError("--dmax must be at least 2")
    if args.field == "exact" and args.dmax > EXACT_RANK_DMAX:
        raise UsageError(f"exact mode supports --dmax up to {EXACT_RANK_DMAX}; use --field mod beyond")
    args.n = 2
    method = _method(args)
    rows = []
    for d in range(2, args.dmax + 1):
        S = _configuration(args, d)
        report = span_dimension(S, method=method, field=args.field, seed=args.seed, bound=args.bound)
        rows.append({
            "d": d,
            "vanishing": ambient_dimension(2, d) - d,
            "computed": report.dimension,
            "conjectured": report.expected,
            "match": report.matches,
            "certified": report.certified,
        })
    payload = {
        "n": 2,
        "method": method,
        "field": args.field,
        "seed": args.seed,
        "configuration": _config_label(args),
        "rows": rows,
        "all_match": all(r["match"] for r in rows),
    }
    _emit(args, payload, "rows", CONJECTURE_COLUMNS)
    if not payload["all_match"]:
        bad = [r for r in rows if not r["match"]]
        return _violation("conjecture", mismatches=bad)
    return EXIT_OK


def cmd_lemma1(args) -> int:
    if args.d < 1:
        raise UsageError("--d must be positive")
    S = _configuration(args, args.d)
    values = [apply_point_functional(S, s.poly) for s in sample_cone_polynomials(S, args.trials, args.seed, args.bound)]
    zeros = sum(1 for v in values if v == 0)
    payload = {
        "n": S.n,
        "d": S.d,
        "trials": args.trials,
        "seed": args.seed,
        "zeros": zeros,
        "nonzeros": len(values) - zeros,
        "asserted": S.d % 2 == 1,
    }
    _emit(args, payload)
    if S.d % 2 == 1 and zeros != len(values):
        return _violation("lemma1", d=S.d, values=[v for v in values if v])
    return EXIT_OK


def cmd_lemma2(args) -> int:
    if args.d < 3:
        raise UsageError("--d must be at least 3")
    methods = ["symbolic", "permanent"] + (["closed_form"] if args.d <= CLOSED_FORM_DMAX else [])
    values = {m: lemma2_witness(args.d, args.n, m) for m in methods}
    agree = len(set(values.values())) == 1
    positive = all(v > 0 for v in values.values())
    payload = {"d": args.d, "n": args.n, "values": values, "agree": agree, "positive": positive}
    if args.format == "json":
        _emit(args, payload)
    else:
        flat = {"d": args.d, "n": args.n, "agree": agree, "positive": positive}
        flat.update(values)
        _emit(args, flat)
    if not (agree and positive):
        return _violation("lemma2", **payload)
    return EXIT_OK


def cmd_mmatrix(args) -> int:
    args.n = 2
    S = _configuration(args, args.d)
    M = build_M(S)
    sign = (-1) ** args.d
    symmetry_ok = M.transpose() == M.scale(sign)
    rank = rank_exact(M)
    parity_ok = rank % 2 == 0 if args.d % 2 else True
    payload = {
        "d": args.d,
        "size": M.rows,
        "symmetry": "skew-symmetric" if sign < 0 else "symmetric",
        "symmetry_ok": symmetry_ok,
        "rank": rank,
        "rank_parity": "even" if rank % 2 == 0 else "odd",
        "parity_ok": parity_ok,
        "conjectured": expected_dimension(2, args.d),
        "seed": args.seed,
        "configuration": _config_label(args),
    }
    _emit(args, payload)
    if not (symmetry_ok and parity_ok):
        return _violation("mmatrix", **payload)
    return EXIT_OK


def cmd_points(args) -> int:
    if args.inspect:
        S = PointConfiguration.from_json(Path(args.inspect).read_text())
    else:
        if args.d is None:
            raise UsageError("points needs --d or --inspect")
        S = _configuration(args, args.d)
    if args.format == "json" and not args.inspect:
        _emit(args, S.to_dict())
        return EXIT_OK
    payload = {
        "n": S.n,
        "d": S.d,
        "generic": is_generic(S),
        "vanishing_dimension": vanishing_dimension(S, S.d),
        "expected_vanishing_dimension": ambient_dimension(S.n, S.d) - S.d,
        "points": S.to_dict()["points"],
    }
    _emit(args, payload)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conepoly", description="Cone polynomial span experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n=True, d=True, dmax=False):
        if n:
            p.add_argument("--n", type=int, default=2, help="projective dimension")
        if d:
            p.add_argument("--d", type=int, required=True, help="number of points (= degree)")
        if dmax:
            p.add_argument("--dmax", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--bound", type=int, default=DEFAULT_BOUND)
        p.add_argument("--field", choices=("exact", "mod"), default="exact")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", help="write output to this file instead of stdout")
        config = p.add_mutually_exclusive_group()
        config.add_argument("--random", action="store_true", help="seeded random generic points (default)")
        config.add_argument("--moment", action="store_true", help="points (1, i, ..., i^n) on the moment curve")
        config.add_argument("--points", help="JSON configuration file")

    methods = ("sampling", "m-matrix", "coeff")

    p = sub.add_parser("dim", help="dimension of the cone span V(n, d)")
    common(p)
    p.add_argument("--method", choices=methods, default=None)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("conjecture", help="table of dim V(2, d) against the conjectured values")
    common(p, n=False, d=False, dmax=True)
    p.add_argument("--method", choices=methods, default="m-matrix")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("lemma1", help="point functional on random cone polynomials")
    common(p)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("lemma2", help="witness value of the point functional")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemma2)

    p = sub.add_parser("mmatrix", help="build M(d) and check symmetry and rank parity")
    common(p, n=False)
    p.set_defaults(func=cmd_mmatrix)

    p = sub.add_parser("points", help="emit or inspect a point configuration")
    common(p, d=False)
    p.add_argument("--d", type=int)
    p.add_argument("--inspect", help="JSON configuration to inspect")
    p.set_defaults(func=cmd_points)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolationError as exc:
        return _violation(args.command, reason=str(exc))
    except UsageError as exc:
        parser.exit(EXIT_USAGE, f"conepoly: error: {exc}\n")
    except (GeometryError, ValueError, OSError) as exc:
        parser.exit(EXIT_USAGE, f"conepoly: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
