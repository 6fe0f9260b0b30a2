"""Command-line entry point: ``milnorfibre <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .arcs import naive_series
from .errors import MilnorFibreError, PolySyntaxError, UnknownVariable, VerificationFailed
from .family import scan
from .fibre import fibre_topology, verify_cf412
from .motives import chi_c
from .polycore import INFINITY, GermFamily, milnor_number, parse_poly
from .resolve import embedded_resolution
from .zeta import (ALL_SYMBOLS, Symbol, acampo_lefschetz, motivic_fibre, series_expand,
                   zeta_rational)

CHECK_SUITE = ("x^2+y^2", "x*y", "x^2-y^2", "y^2-x^3")

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_VERIFY = 3


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _symbol(text):
    try:
        return Symbol.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    parser = argparse.ArgumentParser(prog="milnorfibre",
                                     description="Real motivic Milnor fibres of plane curve germs.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    parser.add_argument("--output", "-o", help="write the report to this file")
    parser.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for family scans")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="embedded resolution data")
    p.add_argument("poly")
    p.add_argument("--extra", nargs=2, action="append", metavar=("COMPONENT", "POINT"), default=[],
                   help="extra blowup at a point (position or component id) of a component")

    p = sub.add_parser("zeta", help="rational zeta function and its series")
    p.add_argument("poly")
    p.add_argument("--symbol", type=_symbol, default=Symbol.plus1)
    p.add_argument("--max-order", type=_positive_int, default=6)

    p = sub.add_parser("milnor", help="motivic Milnor fibres and tubes for all four symbols")
    p.add_argument("poly")

    p = sub.add_parser("fibre", help="grid topology of the real Milnor fibre or tube")
    p.add_argument("poly")
    p.add_argument("--symbol", type=_symbol, default=Symbol.plus1)
    p.add_argument("--delta", type=_rational, default=None)
    p.add_argument("--eta", type=_rational, default=None)
    p.add_argument("--max-grid", type=_positive_int, default=None)

    p = sub.add_parser("acampo", help="Lefschetz numbers of monodromy iterates")
    p.add_argument("poly")
    p.add_argument("--iterates", type=int, nargs="+", default=[0])
    p.add_argument("--variant", choices=("single", "subset"), default="single")

    p = sub.add_parser("naive-zeta", help="truncated-arc zeta coefficients of x^a y^b")
    p.add_argument("--monomial", type=_positive_int, nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--max-order", type=_positive_int, default=6)
    p.add_argument("--symbol", type=_symbol, default=Symbol.plus1)

    p = sub.add_parser("family", help="scan a one-parameter family")
    p.add_argument("--family", required=True, help="polynomial in t, x, y")
    p.add_argument("--range", type=_rational, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--samples", type=_positive_int, default=17)
    p.add_argument("--symbol", type=_symbol, default=Symbol.plus1)

    p = sub.add_parser("check", help="compare χ_c of S^ε with the fibre oracle")
    p.add_argument("polys", nargs="*", default=list(CHECK_SUITE))
    p.add_argument("--max-grid", type=_positive_int, default=None)
    return parser


def _parse_germ(text):
    return parse_poly(text, ("x", "y"))


def _cmd_resolve(args):
    f = _parse_germ(args.poly)
    res = embedded_resolution(f)
    for comp, point in args.extra:
        from .resolve import extra_blowup
        res = extra_blowup(res, (comp, point))
    return res.to_json()


def _cmd_zeta(args):
    res = embedded_resolution(_parse_germ(args.poly))
    z = zeta_rational(res, args.symbol)
    return {
        "symbol": args.symbol.value,
        "rational_form": z.to_json(),
        "series": [b.to_json() for b in series_expand(z, args.max_order)],
    }


def _cmd_milnor(args):
    f = _parse_germ(args.poly)
    res = embedded_resolution(f)
    S, chis = {}, {}
    for sym in ALL_SYMBOLS:
        b = motivic_fibre(res, sym)
        S[sym.value] = str(b)
        chis[sym.value] = int(chi_c(b))
    mu = milnor_number(f)
    return {"S": S, "chi_tilde": chis, "mu": None if mu == INFINITY else mu}


def _cmd_fibre(args):
    rep = fibre_topology(_parse_germ(args.poly), args.symbol, args.delta, args.eta, max_grid=args.max_grid)
    return rep.to_json()


def _cmd_acampo(args):
    res = embedded_resolution(_parse_germ(args.poly))
    return {"variant": args.variant,
            "lefschetz": {str(k): acampo_lefschetz(res, k, args.variant) for k in args.iterates}}


def _cmd_naive(args):
    a, b = args.monomial
    return {"monomial": [a, b], "symbol": args.symbol.value,
            "series": [c.to_json() for c in naive_series(a, b, args.max_order, args.symbol)]}


def _cmd_family(args):
    fam = GermFamily.parse(args.family)
    lo, hi = args.range
    return scan(fam, lo, hi, args.samples, args.symbol, jobs=args.jobs)


def _cmd_check(args):
    report = {}
    failed = False
    for text in args.polys:
        result = verify_cf412(_parse_germ(text), max_grid=args.max_grid)
        report[text] = {sym: {k: v for k, v in entry.items() if k != "report"}
                        for sym, entry in result.items()}
        failed = failed or not all(e["pass"] for e in result.values())
    if failed:
        raise VerificationFailed(json.dumps(report, sort_keys=True))
    return report


COMMANDS = {
    "resolve": _cmd_resolve,
    "zeta": _cmd_zeta,
    "milnor": _cmd_milnor,
    "fibre": _cmd_fibre,
    "acampo": _cmd_acampo,
    "naive-zeta": _cmd_naive,
    "family": _cmd_family,
    "check": _cmd_check,
}


def _pretty(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if obj and all(k.startswith("u^") for k in obj):
            from .motives import BetaPoly
            return pad + str(BetaPoly.from_json(obj))
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {v}" for v in obj)
    return pad + str(obj)


def _render(result, fmt):
    if fmt == "csv":
        if not hasattr(result, "to_csv"):
            raise ValueError("csv output is only available for family scans")
        return result.to_csv()
    data = result.to_json() if hasattr(result, "to_json") else result
    if fmt == "pretty":
        return _pretty(data) + "\n"
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _report_error(exc, args):
    name = type(exc).__name__
    print(f"{name}: {exc}", file=sys.stderr)
    if isinstance(exc, (PolySyntaxError, UnknownVariable)):
        text = getattr(args, "poly", None) or getattr(args, "family", None)
        if text is not None:
            print(f"  {text}\n  {' ' * exc.position}^", file=sys.stderr)


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
        text = _render(result, args.format)
    except VerificationFailed as exc:
        print(f"VerificationFailed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (MilnorFibreError, ValueError) as exc:
        _report_error(exc, args)
        return EXIT_DOMAIN
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())
