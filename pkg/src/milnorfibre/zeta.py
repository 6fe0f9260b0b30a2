"""Covering classes over strata, rational zeta functions, motivic fibres and A'Campo numbers."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import UnsupportedShape
from .motives import (ONE, U, ZERO, BetaPoly, CurveDescriptor, FormulaAtom, beta_curve,
                      beta_sign_recursion)
from .resolve import IrrationalPoint, ResolutionData


class Symbol(enum.Enum):
    plus1 = "+1"
    minus1 = "-1"
    pos = "pos"
    neg = "neg"

    @classmethod
    def parse(cls, text):
        aliases = {"+1": cls.plus1, "1": cls.plus1, "plus1": cls.plus1,
                   "-1": cls.minus1, "minus1": cls.minus1,
                   "pos": cls.pos, ">": cls.pos, ">0": cls.pos,
                   "neg": cls.neg, "<": cls.neg, "<0": cls.neg}
        if isinstance(text, cls):
            return text
        try:
            return aliases[str(text).strip()]
        except KeyError:
            raise ValueError(f"unknown symbol {text!r}; expected one of +1, -1, pos, neg") from None

    @property
    def target(self):
        return {"+1": "=1", "-1": "=-1", "pos": ">0", "neg": "<0"}[self.value]


ALL_SYMBOLS = (Symbol.plus1, Symbol.minus1, Symbol.pos, Symbol.neg)


@dataclass(frozen=True)
class CoverClass:
    stratum: object
    symbol: Symbol
    beta: BetaPoly


def _point_class(N, value, symbol):
    """β of {t : t**N * value ε 1} (level targets) or {t : t**N * value ε 0} (sign targets)."""
    if value == 0:
        raise AssertionError("unit vanishes at a stratum point")
    sgn = 1 if value > 0 else -1
    if symbol in (Symbol.plus1, Symbol.minus1):
        s = 1 if symbol is Symbol.plus1 else -1
        if N % 2:
            return ONE
        return BetaPoly.const(2) if sgn == s else ZERO
    s = 1 if symbol is Symbol.pos else -1
    p = [Fraction(0)] * N + [Fraction(s * sgn)]
    return beta_sign_recursion(FormulaAtom.line(), p)


def cover_class(res, stratum, symbol):
    """Inclusion–exclusion over the two charts of a stratum's component."""
    symbol = Symbol.parse(symbol)
    N = stratum.N_I
    if stratum.dim == 0:
        pres = stratum.presentations[0]
        return CoverClass(stratum, symbol, _point_class(N, pres.value, symbol))
    pa, pb = stratum.presentations
    t = symbol.target

    def piece(pres, extra=()):
        desc = CurveDescriptor.superelliptic(N, pres.w, tuple(pres.punctures) + tuple(extra), t, pres.branch)
        return beta_curve(desc)

    beta = piece(pa) + piece(pb) - piece(pa, (Fraction(0),))
    return CoverClass(stratum, symbol, beta)


def _relevant(res, stratum):
    exc = {c.id for c in res.exceptional}
    return any(i in exc for i in stratum.I)


def _factors(res, stratum):
    return tuple((res.component(i).N, res.component(i).nu) for i in stratum.I)


@dataclass(frozen=True)
class ZetaTerm:
    coefficient: BetaPoly
    factors: tuple

    def to_json(self):
        return {"coefficient": self.coefficient.to_json(),
                "factors": [{"N": n, "nu": v} for n, v in self.factors]}


@dataclass(frozen=True)
class ZetaFunction:
    """Σ coefficient · Π u^-ν T^N / (1 - u^-ν T^N) over the terms."""

    symbol: Symbol
    terms: tuple

    def to_json(self):
        return [t.to_json() for t in self.terms]

    def limit(self):
        """Minus the value at T = oo, where each factor tends to -1."""
        total = ZERO
        for term in self.terms:
            total = total + term.coefficient * (-1) ** len(term.factors)
        return -total


def zeta_rational(res, symbol):
    symbol = Symbol.parse(symbol)
    terms = []
    for s in res.strata:
        if not _relevant(res, s):
            continue
        cover = cover_class(res, s, symbol).beta
        coeff = (U - 1) ** (len(s.I) - 1) * cover
        terms.append(ZetaTerm(coeff, _factors(res, s)))
    return ZetaFunction(symbol, tuple(terms))


def _factor_series(factors, K):
    """Coefficients of T^k, k <= K, in Π_i Σ_{m >= 1} u^(-ν_i m) T^(N_i m)."""
    series = {0: ONE}
    for N, nu in factors:
        nxt = {}
        for k0, c0 in series.items():
            m = 1
            while k0 + N * m <= K:
                k = k0 + N * m
                nxt[k] = nxt.get(k, ZERO) + c0 * BetaPoly.u(-nu * m)
                m += 1
        series = nxt
    return series


def series_expand(z, K):
    """[coefficient of T^1, ..., coefficient of T^K]."""
    out = [ZERO] * (K + 1)
    for term in z.terms:
        for k, c in _factor_series(term.factors, K).items():
            out[k] = out[k] + term.coefficient * c
    return out[1:]


def motivic_fibre(res, symbol):
    """S^ε = Σ (1 - u)^(|I|-1) [E_I^{0,ε}] over strata meeting the exceptional divisor."""
    symbol = Symbol.parse(symbol)
    total = ZERO
    for s in res.strata:
        if _relevant(res, s):
            total = total + (1 - U) ** (len(s.I) - 1) * cover_class(res, s, symbol).beta
    return total


def acampo_lefschetz(res, k, variant="single"):
    """Lefschetz number of the k-th monodromy iterate from complex stratum Euler characteristics."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if variant not in ("single", "subset"):
        raise ValueError(f"unknown variant {variant!r}")
    total = 0
    exc = res.exceptional
    for comp in exc:
        if k % comp.N == 0:
            total += comp.N * res.euler_complex[comp.id]
    if variant == "subset":
        ids = {c.id for c in exc}
        for s in res.strata:
            if s.dim == 0 and all(i in ids for i in s.I) and k % s.N_I == 0:
                total += s.N_I
    return total


def lcm_of_multiplicities(res):
    out = 1
    for c in res.exceptional:
        out = out * c.N // gcd(out, c.N)
    return out
