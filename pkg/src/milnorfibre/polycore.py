"""Exact multivariate polynomials over Q, germ utilities and the Milnor number."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import univariate as uv
from .errors import DegreeBoundExceeded, PolySyntaxError, UnknownVariable

INFINITY = float("inf")

DEFAULT_VARIABLES = ("x", "y")


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    :class:`~fractions.Fraction` coefficients.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms=None, variables=DEFAULT_VARIABLES):
        variables = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(variables):
                raise ValueError(f"exponent {exps} does not match variables {variables}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent {exps}")
            c = Fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (dict(self.terms), self.variables))

    # construction helpers
    @classmethod
    def constant(cls, c, variables=DEFAULT_VARIABLES):
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name, variables=DEFAULT_VARIABLES):
        i = tuple(variables).index(name)
        exps = [0] * len(variables)
        exps[i] = 1
        return cls({tuple(exps): 1}, variables)

    @classmethod
    def monomial(cls, exps, c=1, variables=DEFAULT_VARIABLES):
        return cls({tuple(exps): c}, variables)

    # basic queries
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def nvars(self):
        return len(self.variables)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def homogeneous_part(self, d):
        return Polynomial({e: c for e, c in self.terms.items() if sum(e) == d}, self.variables)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    # arithmetic
    def _align(self, other):
        """Return (self, other) expressed over a common variable tuple."""
        if isinstance(other, (int, Fraction)):
            return self, Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return None
        if other.variables == self.variables:
            return self, other
        if other.total_degree() <= 0:
            return self, Polynomial.constant(other.constant_term(), self.variables)
        if self.total_degree() <= 0:
            return Polynomial.constant(self.constant_term(), other.variables), other
        raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")

    def __add__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(terms, a.variables)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(p + q for p, q in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(out, a.variables)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.variables != other.variables:
            if self.total_degree() <= 0 and other.total_degree() <= 0:
                return self.constant_term() == other.constant_term()
            return False
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # calculus and substitution
    def diff(self, name):
        i = self.variables.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Polynomial(out, self.variables)

    def __call__(self, *values):
        """Evaluate at rational values, one per variable."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        values = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def substitute(self, mapping, variables=None):
        """Compose: replace each variable by a Polynomial (or rational) from ``mapping``.

        Variables absent from ``mapping`` are kept.  The result lives in
        ``variables`` (default: the variables of the images).
        """
        images = []
        for name in self.variables:
            images.append(mapping.get(name, None))
        if variables is None:
            for im in images:
                if isinstance(im, Polynomial) and im.total_degree() > 0:
                    variables = im.variables
                    break
            else:
                variables = self.variables
        variables = tuple(variables)
        resolved = []
        for name, im in zip(self.variables, images):
            if im is None:
                im = Polynomial.var(name, variables)
            elif not isinstance(im, Polynomial):
                im = Polynomial.constant(im, variables)
            elif im.variables != variables:
                if im.total_degree() > 0:
                    raise ValueError("inconsistent substitution variables")
                im = Polynomial.constant(im.constant_term(), variables)
            resolved.append(im)
        powers = [dict() for _ in resolved]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = resolved[i] ** k
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(c, variables)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for e2, c2 in term.terms.items():
                acc[e2] = acc.get(e2, 0) + c2
        return Polynomial(acc, variables)

    def rename(self, variables):
        return Polynomial(self.terms, variables)

    def divide_monomial(self, exps):
        """Exact division by a monomial; raises if not divisible."""
        out = {}
        for e, c in self.terms.items():
            e2 = tuple(a - b for a, b in zip(e, exps))
            if any(k < 0 for k in e2):
                raise ValueError(f"not divisible by monomial {exps}")
            out[e2] = c
        return Polynomial(out, self.variables)

    def min_exponent(self, name):
        i = self.variables.index(name)
        return min((e[i] for e in self.terms), default=0)

    def to_univariate(self, name):
        """Coefficient list in ``name``; every other variable must be absent."""
        i = self.variables.index(name)
        d = self.degree_in(name)
        out = [Fraction(0)] * (d + 1)
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError("polynomial involves other variables")
            out[e[i]] += c
        return uv.trim(out)

    @classmethod
    def from_univariate(cls, coeffs, name, variables):
        i = tuple(variables).index(name)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(variables)
            e[i] = k
            terms[tuple(e)] = c
        return cls(terms, variables)

    def restrict(self, name, value):
        """Substitute a rational value for one variable, keeping the variable list."""
        i = self.variables.index(name)
        value = Fraction(value)
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            e2 = tuple(e2)
            out[e2] = out.get(e2, 0) + c * value ** k
        return Polynomial(out, self.variables)

    # printing
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if not mono:
                body = _fmt_fraction(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_fraction(mag)}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        sign0, body0 = pieces[0]
        text = ("-" if sign0 == "-" else "") + body0
        for s, body in pieces[1:]:
            text += f" {s} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({str(self)!r}, variables={self.variables})"

    def to_sympy(self, symbols=None):
        symbols = symbols or sympy.symbols(self.variables)
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            term = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(symbols, e):
                term *= s ** k
            expr += term
        return expr


def _fmt_fraction(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# parsing ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, allow_negative_powers=False):
        self.tokens = _tokenize(text.replace("−", "-"))
        self.i = 0
        self.variables = tuple(variables)
        self.negpow = allow_negative_powers

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", pos)

    def parse(self):
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty expression", 0)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            if kind in ("num", "name") or (kind == "op" and val == "("):
                raise PolySyntaxError("implicit multiplication is not allowed", pos)
            raise PolySyntaxError(f"unexpected token {val!r}", pos)
        return value

    def expr(self):
        value = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = self._mul(value, self.unary())
            else:
                return value

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return inner if val == "+" else self._neg(inner)
        return self.power()

    def power(self):
        base = self.primary()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val, pos = self.peek()
            if kind == "op" and val == "-" and self.negpow:
                self.take()
                sign = -1
                kind, val, pos = self.peek()
            if kind != "num":
                raise PolySyntaxError("expected integer exponent", pos)
            self.take()
            return self._pow(base, sign * val, pos)
        return base

    def primary(self):
        kind, val, pos = self.take()
        if kind == "num":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                kind2, den, pos2 = self.take()
                if kind2 != "num":
                    raise PolySyntaxError("expected integer denominator", pos2)
                if den == 0:
                    raise PolySyntaxError("zero denominator", pos2)
                return self._const(Fraction(val, den))
            return self._const(Fraction(val))
        if kind == "name":
            if val not in self.variables:
                raise UnknownVariable(val, pos)
            return self._var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected token {val!r}", pos)

    # value hooks, overridden for Laurent parsing
    def _const(self, q):
        return Polynomial.constant(q, self.variables)

    def _var(self, name):
        return Polynomial.var(name, self.variables)

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _pow(self, base, k, pos):
        if k < 0:
            raise PolySyntaxError("negative exponent", pos)
        return base ** k


def parse_poly(text, variables=DEFAULT_VARIABLES):
    """Parse ``text`` into its canonical expanded :class:`Polynomial`.

    >>> str(parse_poly("1/2*x^3*y - y^5"))
    '1/2*x^3*y - y^5'
    """
    return _Parser(text, variables).parse()


# germ utilities --------------------------------------------------------------

def order_at_origin(f):
    """Lowest total degree of a term; ``INFINITY`` for the zero polynomial."""
    if f.is_zero():
        return INFINITY
    return min(sum(e) for e in f.terms)


def _is_isolated(f):
    x, y = sympy.symbols(f.variables[:2])
    fx = f.diff(f.variables[0]).to_sympy((x, y))
    fy = f.diff(f.variables[1]).to_sympy((x, y))
    if fx == 0 and fy == 0:
        return False
    g = sympy.gcd(fx, fy)
    g = sympy.Poly(g, x, y)
    # a common factor through the origin means a curve of critical points
    return g.total_degree() == 0 or g.eval({x: 0, y: 0}) != 0


def _colength(f, k):
    """dim Q[x,y] / (J(f) + m^k), by elimination over the monomials of degree < k."""
    fx = f.diff(f.variables[0])
    fy = f.diff(f.variables[1])
    monos = [(i, d - i) for d in range(k) for i in range(d + 1)]
    index = {m: n for n, m in enumerate(monos)}
    pivots = {}
    rank = 0
    for g in (fx, fy):
        for (i, j) in monos:
            row = {}
            for (a, b), c in g.terms.items():
                e = (a + i, b + j)
                if sum(e) < k:
                    row[index[e]] = row.get(index[e], 0) + c
            row = {col: c for col, c in row.items() if c}
            while row:
                col = min(row)
                if col not in pivots:
                    lead = row[col]
                    pivots[col] = {c2: v / lead for c2, v in row.items()}
                    rank += 1
                    break
                piv = pivots[col]
                factor = row[col]
                for c2, v in piv.items():
                    nv = row.get(c2, 0) - factor * v
                    if nv:
                        row[c2] = nv
                    else:
                        row.pop(c2, None)
    return len(monos) - rank


def milnor_number(f, degree_bound=64):
    """Milnor number of a plane germ, or ``INFINITY`` when not isolated.

    The colength of the Jacobian ideal is read off from truncations modulo
    ``m^k``; two consecutive equal truncated colengths pin the local value.
    """
    if f.constant_term() != 0:
        raise ValueError("milnor_number expects f(0,0) = 0")
    if not _is_isolated(f):
        return INFINITY
    prev = None
    for k in range(1, degree_bound + 1):
        c = _colength(f, k)
        if prev is not None and c == prev:
            return c
        prev = c
    raise DegreeBoundExceeded(f"colength not stabilized below degree {degree_bound}")


@dataclass(frozen=True)
class GermFamily:
    """One-parameter family ``f_t(x, y)`` given as a polynomial in ``(t, x, y)``."""

    body: Polynomial
    parameter: str = "t"

    def __post_init__(self):
        if self.body.variables != (self.parameter, "x", "y"):
            raise ValueError("family body must use variables (t, x, y)")
        for e in self.body.terms:
            if e[1] == 0 and e[2] == 0:
                raise ValueError("family does not vanish on x = y = 0")

    @classmethod
    def parse(cls, text):
        return cls(parse_poly(text, ("t", "x", "y")))

    def coefficient_polys(self):
        """Map (i, j) -> coefficient list in t of x^i y^j."""
        out = {}
        for (k, i, j), c in self.body.terms.items():
            coeffs = out.setdefault((i, j), [])
            while len(coeffs) <= k:
                coeffs.append(Fraction(0))
            coeffs[k] += c
        return {key: uv.trim(v) for key, v in out.items()}

    def __str__(self):
        return str(self.body)


def specialize(family, t0):
    """``f_{t0}`` as a polynomial in (x, y)."""
    t0 = Fraction(t0)
    out = {}
    for (k, i, j), c in family.body.terms.items():
        out[(i, j)] = out.get((i, j), 0) + c * t0 ** k
    return Polynomial(out, ("x", "y"))


def linear_change(f, matrix):
    """``f(a11 x + a12 y, a21 x + a22 y)`` for a rational 2x2 matrix."""
    (a11, a12), (a21, a22) = matrix
    x = Polynomial.var("x", f.variables)
    y = Polynomial.var("y", f.variables)
    return f.substitute({f.variables[0]: a11 * x + a12 * y, f.variables[1]: a21 * x + a22 * y}, f.variables)
