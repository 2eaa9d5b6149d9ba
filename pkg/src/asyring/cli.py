"""Command-line front end.

    asyring table chords --order 12 --asy-order 9 --format csv
    asyring fit b000699.txt --alpha 2 --beta 1/2 --terms 2
    asyring verify all

Exit codes: 0 success, 1 verification or convergence failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from . import __version__
from .applications import APPLICATIONS, RouteDisagreementError, ROUTES, SequenceTable, compute_table
from .checks import SUITES, run_suite
from .numeric import InsufficientDataError, fit_asymptotics
from .records import ParseError, format_rational, parse_rational, parse_sequence_text

__all__ = ["main", "build_parser", "table_record", "table_csv", "table_pretty"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

MAX_ORDER = 512
DEFAULT_ORDER = 16
DEFAULT_ASY_ORDER = 10

log = logging.getLogger("asyring")


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _natural(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v}")
    return v


# -- table ------------------------------------------------------------------


def table_record(table: SequenceTable, order: int, asy_order: int) -> dict:
    routes = [table.provenance] + ([table.checked_against] if table.checked_against else [])
    return {
        "tool": "asyring",
        "version": __version__,
        "order": order,
        "asy_order": asy_order,
        "routes": routes,
        "verification": {"routes_agree": table.checked_against is not None},
        "table": table.to_record(),
    }


def table_csv(table: SequenceTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "kind", "k", "value"])
    w.writerow([table.name, "alpha", "", format_rational(table.alpha)])
    w.writerow([table.name, "beta", "", format_rational(table.beta)])
    w.writerow([table.name, "prefactor_exp_arg", "", format_rational(table.asy_prefactor.exp_arg)])
    w.writerow([table.name, "prefactor_sqrt_two_pi_pow", "", table.asy_prefactor.sqrt_two_pi_pow])
    for k, c in enumerate(table.series):
        w.writerow([table.name, "series", k, format_rational(c)])
    for k, c in enumerate(table.asy or ()):
        w.writerow([table.name, "asy", k, format_rational(c)])
    return buf.getvalue()


def table_pretty(table: SequenceTable) -> str:
    lines = [
        f"{table.name}  (alpha={table.alpha}, beta={table.beta})",
        f"routes: {table.provenance}" + (f" = {table.checked_against}" if table.checked_against else ""),
        "",
        f"{'n':>4}  series coefficient",
    ]
    lines += [f"{k:>4}  {c}" for k, c in enumerate(table.series)]
    if table.asy is not None:
        lines += ["", f"A f = {table.asy_prefactor} * (sum_k a_k x^k)", f"{'k':>4}  a_k"]
        lines += [f"{k:>4}  {c}" for k, c in enumerate(table.asy)]
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    for label, value in (("order", args.order), ("asy-order", args.asy_order)):
        if value > MAX_ORDER and not args.allow_large:
            raise UsageError(f"--{label} {value} exceeds {MAX_ORDER}; pass --allow-large to override")
    try:
        table = compute_table(args.app, args.order, args.asy_order, route=args.route,
                              cross_check=not args.single_route)
    except RouteDisagreementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        sys.stdout.write(json.dumps(table_record(table, args.order, args.asy_order), indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        sys.stdout.write(table_csv(table))
    else:
        sys.stdout.write(table_pretty(table))
    return EXIT_OK


# -- fit --------------------------------------------------------------------


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _dense(values: dict[int, Fraction]) -> list[Fraction]:
    if min(values) < 0:
        raise ParseError(f"offset maps an index to negative exponent {min(values)}")
    top = max(values)
    lo = min(values)
    missing = [n for n in range(lo, top + 1) if n not in values]
    if missing:
        raise ParseError(f"gap in the data: exponent {missing[0]} is missing")
    # exponents below the first data point never enter the fit window
    return [values.get(n, Fraction(0)) for n in range(top + 1)]


def cmd_fit(args) -> int:
    try:
        text = _read_input(args.input)
        seq = _dense(parse_sequence_text(text, offset=args.offset))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = fit_asymptotics(seq, args.alpha, args.beta, args.terms, args.extrap_order, args.rtol)
    except (InsufficientDataError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out = json.loads(report.to_json())
    c0 = report.estimates[0]
    out["ratios_to_c0"] = [c / c0 for c in report.estimates] if c0 else None
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    for k, (c, e, ok) in enumerate(zip(report.estimates, report.errors, report.converged)):
        print(f"c_{k} = {c!r} +- {e:.3g} {'converged' if ok else 'NOT converged'}", file=sys.stderr)
    return EXIT_OK if report.all_converged else EXIT_FAIL


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    for name in names:
        results, elapsed = run_suite(name, seed=args.seed, instances=args.instances)
        for r in results:
            print(r.line())
            failed += not r.passed
        print(f"# suite {name}: {sum(r.passed for r in results)}/{len(results)} passed in {elapsed:.2f}s")
    return EXIT_FAIL if failed else EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="asyring", description="Exact asymptotic expansions of factorially divergent series.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="series and normalized asymptotic coefficients")
    t.add_argument("app", choices=APPLICATIONS)
    t.add_argument("--order", type=_natural, default=DEFAULT_ORDER, help="series truncation order")
    t.add_argument("--asy-order", type=_natural, default=DEFAULT_ASY_ORDER,
                   help="number of asymptotic coefficients (0 for none)")
    t.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    t.add_argument("--route", choices=ROUTES, default=ROUTES[0], help="route whose result is emitted")
    t.add_argument("--single-route", action="store_true", help="skip the cross-check against the other route")
    t.add_argument("--allow-large", action="store_true", help=f"permit orders above {MAX_ORDER}")
    t.set_defaults(func=cmd_table)

    f = sub.add_parser("fit", help="estimate asymptotic coefficients from sequence data")
    f.add_argument("input", nargs="?", default="-", help="plain list or OEIS b-file; '-' for stdin")
    f.add_argument("--alpha", type=_rational_arg, required=True)
    f.add_argument("--beta", type=_rational_arg, required=True)
    f.add_argument("--terms", type=int, default=1, help="number of coefficients c_0..c_{terms-1}")
    f.add_argument("--offset", type=int, default=0,
                   help="added to file indices to get series exponents "
                        "(0 for both A000699 and A111111)")
    f.add_argument("--extrap-order", type=int, default=4)
    f.add_argument("--rtol", type=float, default=1e-5)
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", help="run self-check suites")
    v.add_argument("suite", choices=(*SUITES, "all"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--instances", type=int, default=25, help="random instances per identity law")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
