"""Scan a one-parameter family f_t and group samples by the value of β(S^ε(f_t)).

Sampling cannot certify constancy between samples; the output is a
candidate stratification of the scanned interval.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import univariate as uv
from .errors import IrrationalCenter, MilnorFibreError, NotAGerm, ResolutionError
from .polycore import INFINITY, milnor_number, specialize
from .resolve import embedded_resolution
from .zeta import Symbol, motivic_fibre

FAILURE_TAGS = {
    IrrationalCenter: "irrational-center",
    NotAGerm: "not-a-germ",
    ResolutionError: "resolution-error",
}


@dataclass
class Sample:
    t: Fraction
    beta: object = None
    failure: str | None = None

    @property
    def ok(self):
        return self.failure is None


@dataclass
class ScanReport:
    symbol: Symbol
    samples: list
    intervals: list
    breakpoints: list
    detected: list = field(default_factory=list)
    label: str = "candidate stratification"

    def to_json(self):
        return {
            "label": self.label,
            "symbol": self.symbol.value,
            "samples": [{"t": str(s.t), "beta": str(s.beta) if s.ok else None,
                         "status": "ok" if s.ok else s.failure} for s in self.samples],
            "intervals": [{"left": str(lo), "right": str(hi), "beta": str(b)}
                          for lo, hi, b in self.intervals],
            "breakpoints": [str(b) for b in self.breakpoints],
            "detected_breakpoints": [str(b) for b in self.detected],
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "beta", "status"])
        for s in self.samples:
            writer.writerow([str(s.t), str(s.beta) if s.ok else "", "ok" if s.ok else s.failure])
        return buf.getvalue()


def evaluate_sample(family, t, symbol):
    """β(S^ε(f_t)) or a failure tag."""
    t = Fraction(t)
    f = specialize(family, t)
    if f.is_zero():
        return Sample(t, failure="not-a-germ")
    try:
        if milnor_number(f) == INFINITY:
            return Sample(t, failure="not-isolated")
        res = embedded_resolution(f)
        return Sample(t, beta=motivic_fibre(res, symbol))
    except MilnorFibreError as exc:
        tag = next((v for k, v in FAILURE_TAGS.items() if isinstance(exc, k)), type(exc).__name__)
        return Sample(t, failure=tag)


def _evaluate(args):
    return evaluate_sample(*args)


def _sample_points(lo, hi, n, detected):
    step = (hi - lo) / (n - 1)
    base = sorted({lo + k * step for k in range(n)})
    points = set(base)
    for b in detected:
        if not lo <= b <= hi:
            continue
        points.add(b)
        left = [p for p in base if p < b]
        right = [p for p in base if p > b]
        if left:
            points.add((left[-1] + b) / 2)
        if right:
            points.add((right[0] + b) / 2)
    return sorted(points)


def _change_point(left, right, detected):
    """Where β changes between two adjacent samples; a detected sample wins over a midpoint."""
    for b in (right, left):
        if b in detected:
            return b
    between = [b for b in detected if left < b < right]
    return between[0] if between else (left + right) / 2


def scan(family, lo, hi, n, symbol, jobs=1):
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if n < 2:
        raise ValueError("need at least two samples")
    symbol = Symbol.parse(symbol)
    detected = detect_breakpoints(family)
    points = _sample_points(lo, hi, n, detected)
    args = [(family, t, symbol) for t in points]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(_evaluate, args))
    else:
        samples = [_evaluate(a) for a in args]

    intervals = []
    breakpoints = []
    run = None
    for prev, cur in zip([None] + samples, samples):
        if not cur.ok:
            breakpoints.append(cur.t)
            if run:
                intervals.append(tuple(run))
            run = None
            continue
        if run is not None and run[2] == cur.beta:
            run[1] = cur.t
            continue
        if run is not None:
            intervals.append(tuple(run))
            breakpoints.append(_change_point(prev.t, cur.t, detected))
        run = [cur.t, cur.t, cur.beta]
    if run:
        intervals.append(tuple(run))
    return ScanReport(symbol, samples, intervals, sorted(set(breakpoints)),
                      [b for b in detected if lo <= b <= hi])


# breakpoint detection ---------------------------------------------------------

def _lowest_form(family):
    coeffs = family.coefficient_polys()
    d = min(i + j for (i, j), c in coeffs.items() if c)
    return d, {(i, j): c for (i, j), c in coeffs.items() if c and i + j == d}


def _form_structure(form, d, t0):
    """(order, sorted root multiplicities in P^1) of the lowest form at t = t0."""
    dense = [Fraction(0)] * (d + 1)
    for (i, j), c in form.items():
        dense[i] += uv.evaluate(c, t0)
    dense = uv.trim(dense)
    if not dense:
        return None
    mults = []
    for m, fac in uv.squarefree_decomposition(dense).items():
        mults += [m] * uv.degree(fac)
    if uv.degree(dense) < d:
        mults.append(d - uv.degree(dense))
    return tuple(sorted(mults))


def _t_poly_to_sympy(coeffs, t):
    return sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(coeffs))


def detect_breakpoints(family):
    """Rational t where the lowest-degree form of f_t changes its factor structure."""
    d, form = _lowest_form(family)
    t, x = sympy.symbols("t x")
    candidates = set()
    # every coefficient vanishing at once raises the order
    g = None
    for c in form.values():
        g = c if g is None else uv.gcd(g, c)
    if g and uv.degree(g) > 0:
        candidates.update(r for r, _ in uv.rational_roots(g))
    # root collisions of the form, and roots escaping to x = oo or y = oo
    dehomog = sum(_t_poly_to_sympy(c, t) * x ** i for (i, j), c in form.items())
    poly = sympy.Poly(dehomog, x)
    checks = [poly.LC(), poly.coeff_monomial(1)]
    if poly.degree() >= 2:
        checks.append(sympy.discriminant(poly))
    for expr in checks:
        expr = sympy.Poly(sympy.expand(expr), t)
        if expr.is_zero or expr.degree() < 1:
            continue
        candidates.update(Fraction(int(r.p), int(r.q)) for r in expr.ground_roots())
    generic_t = Fraction(7919, 104729)
    while generic_t in candidates:
        generic_t += Fraction(1, 997)
    generic = _form_structure(form, d, generic_t)
    return sorted(c for c in candidates if _form_structure(form, d, c) != generic)
