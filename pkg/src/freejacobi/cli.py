"""Command-line interface: ``freejacobi <subcommand> ...``.

Exact parameters are entered as ``p/q`` strings.  Coefficient tables are
cached as JSON under ``$FREEJACOBI_CACHE`` (nothing is cached when unset),
keyed by ``(lambda, theta, n_max, version)``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .coefficients import ROUTES, CoeffTable, LimitParams, build_table
from .errors import FreeJacobiError
from .exact import HalfIntegerParams, format_rational, parse_rational
from .mc_sim import MCConfig, estimate_moments
from .moments import ExpPoly, finite_moment, limit_moment
from .verify import SUITES, run_suite

log = logging.getLogger("freejacobi")

CACHE_ENV = "FREEJACOBI_CACHE"


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def _rational(text: str) -> Fraction:
    if not _RATIONAL.fullmatch(text.strip()):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}")
    try:
        return parse_rational(text)
    except FreeJacobiError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _t_grid(args) -> list[float]:
    if args.grid:
        start, stop, num = args.grid
        num = int(num)
        if num < 1:
            raise argparse.ArgumentTypeError("grid needs at least one point")
        if num == 1:
            return [start]
        step = (stop - start) / (num - 1)
        return [start + i * step for i in range(num)]
    return [float(t) for t in args.t]


def _cache_path(params: LimitParams, n_max: int, route: str) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    lam = format_rational(params.lam).replace("/", "_")
    theta = format_rational(params.theta).replace("/", "_")
    return Path(root) / f"coeffs_l{lam}_t{theta}_n{n_max}_{route}_v{__version__}.json"


def load_or_build_table(n_max: int, params: LimitParams, route: str = "division",
                        coeffs_file: str | None = None, jobs: int = 1) -> CoeffTable:
    """A table covering ``n_max``; read from file or cache when possible."""
    if coeffs_file:
        table = CoeffTable.from_json(Path(coeffs_file).read_text())
        if table.params != params:
            raise FreeJacobiError("coefficient file was built for different (lambda, theta)")
        return table
    path = _cache_path(params, n_max, route)
    if path is not None and path.exists():
        log.info("using cached coefficients %s", path)
        return CoeffTable.from_json(path.read_text())
    table = _build(n_max, params, route, jobs)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(table.to_json(indent=1))
    return table


def _build(n_max: int, params: LimitParams, route: str, jobs: int, n_min: int = 1) -> CoeffTable:
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return build_table(n_max, params, route, executor=ex, n_min=n_min)
    return build_table(n_max, params, route, n_min=n_min)


def _emit_rows(header: Sequence[str], rows: list[Sequence], fmt: str, extra: dict | None = None,
               out=None) -> None:
    out = out or sys.stdout
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "json":
        doc = dict(extra or {})
        doc["rows"] = [dict(zip(header, r)) for r in rows]
        json.dump(doc, out, indent=1)
        out.write("\n")
    else:
        if extra:
            for k, v in extra.items():
                out.write(f"{k}: {v if not isinstance(v, dict) else json.dumps(v)}\n")
        out.write("  ".join(f"{h:>14}" for h in header) + "\n")
        for r in rows:
            out.write("  ".join(f"{v:>14.10g}" if isinstance(v, float) else f"{v!s:>14}" for v in r) + "\n")


def _moment_rows(e: ExpPoly, ts: list[float]) -> list[tuple[float, float]]:
    return [(t, e(t)) for t in ts]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_finite(args) -> int:
    params = HalfIntegerParams(args.m, args.p, args.d)
    fm = finite_moment(args.n, params)
    e = fm.as_exppoly()
    rows = _moment_rows(e, _t_grid(args))
    if args.format == "json":
        _emit_rows(("t", "moment"), rows, "json", {"n": args.n, "exppoly": e.to_dict()})
    else:
        _emit_rows(("t", "moment"), rows, args.format,
                   {"M_n(t)": str(e)} if args.format == "pretty" else None)
    return 0


def cmd_limit(args) -> int:
    params = LimitParams(args.lam, args.theta)
    table = load_or_build_table(args.n, params, args.route, args.coeffs, args.jobs)
    e = limit_moment(args.n, params, table)
    rows = _moment_rows(e, _t_grid(args))
    if args.format == "json":
        _emit_rows(("t", "moment"), rows, "json", {"n": args.n, "exppoly": e.to_dict()})
    else:
        _emit_rows(("t", "moment"), rows, args.format,
                   {"M_n(t)": str(e)} if args.format == "pretty" else None)
    return 0


def cmd_coeff(args) -> int:
    params = LimitParams(args.lam, args.theta)
    n_min = 1 if args.cumulative else args.n
    table = _build(args.n, params, args.route, args.jobs, n_min=n_min)
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(("n", "h", "l", "value", "route"))
        for (n, h, l), (v, r) in sorted(table.entries.items()):
            w.writerow((n, h, l, format_rational(v), r))
    elif args.format == "pretty":
        for (n, h, l), (v, r) in sorted(table.entries.items()):
            print(f"c[{n},{h},{l}] = {format_rational(v)}  ({r})")
    else:
        print(table.to_json(indent=1))
    return 0


def cmd_verify(args) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        report = run_suite(name)
        print(report.summary())
        if report.notes:
            print("  notes:", json.dumps(report.notes))
        if not report.passed:
            ok = False
            dump = report.failures[: args.max_failures]
            print(json.dumps({"suite": name, "counterexamples": dump}, indent=1), file=sys.stderr)
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    cfg = MCConfig(d=args.d, m=args.m, p=args.p, t=args.t, steps=args.steps,
                   samples=args.samples, seed=args.seed, streams=args.streams,
                   batch=args.batch, time_scale=args.time_scale)
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as ex:
            result = estimate_moments(cfg, args.nmax, executor=ex)
    else:
        result = estimate_moments(cfg, args.nmax)
    doc = result.to_dict()
    print(json.dumps(doc["moments"] if args.bare else doc, indent=1))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("n", "mean", "stderr"))
            for row in doc["moments"]:
                w.writerow((row["n"], repr(row["mean"]), repr(row["stderr"])))
    return 0


def cmd_table(args) -> int:
    ts = _t_grid(args)
    header = ["t"] + [f"M_{n}" for n in args.n]
    if args.kind == "finite":
        params = HalfIntegerParams(args.m, args.p, args.d)
        curves = [finite_moment(n, params).as_exppoly() for n in args.n]
    else:
        params = LimitParams(args.lam, args.theta)
        table = load_or_build_table(max(args.n), params, args.route, args.coeffs, args.jobs)
        curves = [limit_moment(n, params, table) for n in args.n]
    rows = [[t] + [c(t) for c in curves] for t in ts]
    _emit_rows(header, rows, "csv")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_grid(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", nargs="+", default=["0", "1"], metavar="T", help="time points (default: 0 1)")
    g.add_argument("--grid", nargs=3, type=float, metavar=("START", "STOP", "NUM"),
                   help="evenly spaced time grid")


def _add_format(p: argparse.ArgumentParser, default: str = "pretty") -> None:
    p.add_argument("--format", choices=("json", "csv", "pretty"), default=default)


def _add_limit_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--route", choices=ROUTES, default="division")
    p.add_argument("--coeffs", metavar="FILE", help="coefficient table JSON (as written by `coeff`)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for coefficient jobs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freejacobi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finite", help="finite-size moment M_n(t) of the m x p corner of U(d)")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p.add_argument("p", type=_rational, help="integer or half-integer")
    p.add_argument("d", type=int)
    _add_grid(p)
    _add_format(p)
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("limit", help="normalized large-size moment at (lambda, theta)")
    p.add_argument("n", type=int)
    p.add_argument("lam", type=_rational, metavar="lambda")
    p.add_argument("theta", type=_rational)
    _add_grid(p)
    _add_format(p)
    _add_limit_source(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("coeff", help="coefficient table c[n,h,l] as JSON")
    p.add_argument("n", type=int)
    p.add_argument("lam", type=_rational, metavar="lambda")
    p.add_argument("theta", type=_rational)
    p.add_argument("route", nargs="?", choices=ROUTES, default="division")
    p.add_argument("--cumulative", action="store_true", help="include every degree up to n")
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p, "json")
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("verify", help="run an identity / cross-check suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--max-failures", type=int, default=10, help="counterexamples to print per suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo moments from unitary Brownian motion")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--steps", type=int, default=400)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--streams", type=int, default=4)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--batch", type=int, default=500)
    p.add_argument("--time-scale", type=float, default=None, help="physical time per unit t (default 1/d)")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.add_argument("--csv", metavar="FILE", help="also write n,mean,stderr rows here")
    p.add_argument("--bare", action="store_true", help="print only the moments array")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="plot-ready CSV of moments over a time grid")
    p.add_argument("kind", choices=("finite", "limit"))
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=_rational)
    p.add_argument("--d", type=int)
    p.add_argument("--lambda", dest="lam", type=_rational)
    p.add_argument("--theta", type=_rational)
    _add_grid(p)
    _add_limit_source(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "table":
        need = ("m", "p", "d") if args.kind == "finite" else ("lam", "theta")
        missing = [k for k in need if getattr(args, k) is None]
        if missing:
            parser.error(f"table {args.kind} needs " + ", ".join("--" + ("lambda" if k == "lam" else k)
                                                                for k in missing))
    try:
        return args.func(args)
    except (FreeJacobiError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
