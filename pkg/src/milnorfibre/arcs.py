"""Naive truncated-arc computation of zeta coefficients for monomial germs x^a y^b.

An arc (x(s), y(s)) with x of order i and y of order j, i, j >= 1, has
f-order a*i + b*j and angular component ac(x)^a * ac(y)^b.  Truncated at
order k, the free coefficients contribute an affine factor, so each stratum
is a torus condition on the two angular components times an affine space.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .motives import ZERO, BetaPoly, U
from .zeta import Symbol


@dataclass(frozen=True)
class TruncatedArcStratum:
    i: int
    j: int
    k: int
    a: int
    b: int
    symbol: Symbol

    def __post_init__(self):
        if not (1 <= self.i <= self.k and 1 <= self.j <= self.k):
            raise ValueError("orders must lie in 1..k")
        if self.a * self.i + self.b * self.j != self.k:
            raise ValueError("a*i + b*j must equal k")

    @property
    def free_dims(self):
        return (self.k - self.i) + (self.k - self.j)

    def beta(self):
        return torus_class(self.a, self.b, self.symbol) * BetaPoly.u(self.free_dims)


def torus_class(a, b, symbol):
    """β of {(ξ, η) in (R*)^2 : ξ^a η^b ε 1} (or ε 0 for the sign symbols).

    A monomial change of torus coordinates turns ξ^a η^b into ξ'^g with
    g = gcd(a, b), so the set is {ξ'^g ε 1} × R*.
    """
    if a < 1 or b < 1:
        raise ValueError("exponents must be positive")
    symbol = Symbol.parse(symbol)
    odd = gcd(a, b) % 2 == 1
    torus = U - 1
    if symbol is Symbol.plus1:
        return torus * (1 if odd else 2)
    if symbol is Symbol.minus1:
        return torus if odd else ZERO
    half_or_all = torus.half() if odd else torus
    if symbol is Symbol.pos:
        return torus * half_or_all
    return torus * half_or_all if odd else ZERO


def arc_strata(a, b, k, symbol):
    symbol = Symbol.parse(symbol)
    out = []
    for i in range(1, k + 1):
        rest = k - a * i
        if rest >= b and rest % b == 0:
            out.append(TruncatedArcStratum(i, rest // b, k, a, b, symbol))
    return out


def naive_coefficient(a, b, k, symbol):
    """Coefficient of T^k of the naive zeta function of x^a y^b."""
    total = ZERO
    for stratum in arc_strata(a, b, k, symbol):
        total = total + stratum.beta()
    return total * BetaPoly.u(-2 * k)


def naive_series(a, b, K, symbol):
    return [naive_coefficient(a, b, k, symbol) for k in range(1, K + 1)]
