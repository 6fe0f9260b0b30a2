"""Virtual Poincaré polynomials of the formula shapes produced by the pipeline.

Everything here lives in Z[1/2][u, 1/u].  The Lefschetz class realizes to
``u``; evaluating at ``u = -1`` gives the compactly supported Euler
characteristic of the real points.

Smooth real affine curves are handled by counting: if the smooth projective
completion has ``c`` real circles and the curve misses ``p`` of its real
points, the class is ``c*(u + 1) - p``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import univariate as uv
from .errors import UnitVanishesOnStratum, UnsupportedShape
from .polycore import Polynomial, _Parser


def _is_dyadic(q):
    d = q.denominator
    return d & (d - 1) == 0


class BetaPoly:
    """Element of Z[1/2][u, u^-1], stored as ``{exponent: Fraction}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for k, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                if not _is_dyadic(c):
                    raise ValueError(f"coefficient {c} is not in Z[1/2]")
                clean[int(k)] = clean.get(int(k), 0) + c
        self.coeffs = {k: c for k, c in clean.items() if c}

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def u(cls, k=1):
        return cls({k: 1})

    def _lift(self, other):
        if isinstance(other, BetaPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BetaPoly.const(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return BetaPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BetaPoly({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return BetaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("only monomials are invertible")
            (k, c), = self.coeffs.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials are invertible")
            return BetaPoly({k * n: c ** n})
        out = BetaPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def half(self):
        return BetaPoly({k: c / 2 for k, c in self.coeffs.items()})

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self):
        return not self.coeffs

    def __call__(self, u):
        u = Fraction(u)
        return sum((c * u ** k for k, c in self.coeffs.items()), Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            c = self.coeffs[k]
            mag = abs(c)
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if not mono:
                body = cs
            elif mag == 1:
                body = mono
            else:
                body = f"{cs}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text

    def __repr__(self):
        return f"BetaPoly({str(self)!r})"

    def to_json(self):
        return {f"u^{k}": _frac_str(self.coeffs[k]) for k in sorted(self.coeffs, reverse=True)}

    @classmethod
    def from_json(cls, data):
        out = {}
        for key, val in data.items():
            if not key.startswith("u^"):
                raise ValueError(f"bad BetaPoly key {key!r}")
            out[int(key[2:])] = Fraction(val)
        return cls(out)

    @classmethod
    def parse(cls, text):
        return _BetaParser(text).parse()

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class _BetaParser(_Parser):
    def __init__(self, text):
        super().__init__(text, ("u",), allow_negative_powers=True)

    def _const(self, q):
        return BetaPoly.const(q)

    def _var(self, name):
        return BetaPoly.u()

    def _pow(self, base, k, pos):
        return base ** k


U = BetaPoly.u()
ONE = BetaPoly.const(1)
ZERO = BetaPoly()


def chi_c(b):
    """Evaluate a class at ``u = -1``."""
    return b(-1)


# catalog shapes ---------------------------------------------------------------

@dataclass(frozen=True)
class Points:
    count: int


@dataclass(frozen=True)
class Affine:
    dim: int


@dataclass(frozen=True)
class Torus:
    dim: int


@dataclass(frozen=True)
class ProjectiveLine:
    punctures: int = 0


@dataclass(frozen=True)
class Product:
    parts: tuple


@dataclass(frozen=True)
class Disjoint:
    parts: tuple


def _as_coeffs(w):
    if isinstance(w, Polynomial):
        if w.nvars != 1:
            names = [n for i, n in enumerate(w.variables) if any(e[i] for e in w.terms)]
            if len(names) > 1:
                raise UnsupportedShape("expected a polynomial in one variable")
            name = names[0] if names else w.variables[0]
            return w.to_univariate(name)
        return w.to_univariate(w.variables[0])
    return uv.trim(w)


@dataclass(frozen=True)
class CurveDescriptor:
    """A one-dimensional shape.

    ``kind`` is ``"points"`` (``count`` real points), ``"punctured-line"``
    (affine line minus ``count`` points) or ``"superelliptic"``: the set
    ``{(t, s): s**N * w(t) <target>}`` over the line in ``t`` minus the
    rational ``punctures`` and minus the real roots of ``branch``.
    ``target`` is one of ``"=1"``, ``"=-1"``, ``">0"``, ``"<0"``; the last two
    describe two-dimensional tubes over the same base.
    """

    kind: str
    count: int = 0
    N: int = 1
    w: tuple = ()
    punctures: tuple = ()
    target: str = "=1"
    branch: tuple = ()

    @classmethod
    def points(cls, count):
        return cls("points", count=count)

    @classmethod
    def punctured_line(cls, count):
        return cls("punctured-line", count=count)

    @classmethod
    def superelliptic(cls, N, w, punctures=(), target="=1", branch=()):
        if target not in ("=1", "=-1", ">0", "<0"):
            raise UnsupportedShape(f"unknown target {target!r}")
        if N < 1:
            raise UnsupportedShape("N must be positive")
        punctures = tuple(sorted(set(Fraction(p) for p in punctures)))
        return cls("superelliptic", N=N, w=tuple(_as_coeffs(w)), punctures=punctures,
                   target=target, branch=tuple(_as_coeffs(branch)) if branch else ())


def beta_constructible(shape):
    """β of a catalog shape (points, affine spaces, tori, P^1, products, disjoint unions)."""
    if isinstance(shape, Points):
        return BetaPoly.const(shape.count)
    if isinstance(shape, Affine):
        return U ** shape.dim
    if isinstance(shape, Torus):
        return (U - 1) ** shape.dim
    if isinstance(shape, ProjectiveLine):
        return U + 1 - shape.punctures
    if isinstance(shape, Product):
        out = ONE
        for part in shape.parts:
            out = out * beta_constructible(part)
        return out
    if isinstance(shape, Disjoint):
        out = ZERO
        for part in shape.parts:
            out = out + beta_constructible(part)
        return out
    if isinstance(shape, CurveDescriptor):
        return beta_curve(shape)
    raise UnsupportedShape(f"not a catalog shape: {shape!r}")


# the line base: R minus punctures minus real roots of a branch polynomial ----

@dataclass
class _LineBase:
    punctures: tuple
    branch: list = field(default_factory=list)

    def excluded_branch_roots(self):
        if not self.branch:
            return 0
        rest = uv.remove_roots(list(self.branch), self.punctures)
        return uv.count_real_roots(rest)

    def beta(self):
        return U - len(self.punctures) - self.excluded_branch_roots()

    def roots_inside(self, p):
        """Distinct real roots of p lying in the base."""
        rest = uv.remove_roots(list(p), self.punctures)
        if self.branch:
            g = uv.gcd(uv.squarefree_part(rest), list(self.branch))
            rest = uv.divmod_poly(uv.squarefree_part(rest), g)[0] if uv.degree(g) > 0 else rest
        return uv.count_real_roots(rest)

    def check_branch_in_zeros(self, w):
        if not self.branch:
            return
        b = uv.squarefree_part(uv.remove_roots(list(self.branch), self.punctures))
        if uv.degree(b) < 1:
            return
        g = uv.gcd(b, w)
        if uv.count_real_roots(b) != uv.count_real_roots(g):
            raise UnsupportedShape("branch points must be zeros of the curve equation")


def _real_root_layout(w):
    """Distinct real roots of ``w`` in increasing order.

    Returns ``(roots, signs)``: ``roots`` is a list of ``(interval, multiplicity)``
    with pairwise disjoint isolating intervals, and ``signs[k]`` is the sign of
    ``w`` on the k-th gap (``len(roots) + 1`` gaps).
    """
    items = []
    for m, factor in uv.squarefree_decomposition(w).items():
        for iv in uv.isolate_real_roots(factor):
            items.append([iv, m, factor])
    items.sort(key=lambda it: it[0][0])

    def overlaps(a, b):
        (l1, h1), (l2, h2) = a, b
        if l1 == h1 and l2 == h2:
            return l1 == l2
        if l1 == h1:
            return l2 <= l1 <= h2 if l2 != h2 else False
        if l2 == h2:
            return l1 <= l2 <= h1
        return l2 < h1 and l1 < h2

    def root_at(x):
        return uv.evaluate(w, x) == 0

    changed = True
    while changed:
        changed = False
        items.sort(key=lambda it: (it[0][0] + it[0][1]) / 2)
        for a, b in zip(items, items[1:]):
            ia, ib = a[0], b[0]
            touching = ia[1] == ib[0] and (root_at(ia[1]))
            if overlaps(ia, ib) or touching or ia[1] > ib[0]:
                for it in (a, b):
                    lo, hi = it[0]
                    if lo != hi:
                        it[0] = uv.refine(it[2], it[0], (hi - lo) / 4)
                changed = True
                break
    samples = []
    if not items:
        samples = [Fraction(0)]
    else:
        samples.append(items[0][0][0] - 1)
        for a, b in zip(items, items[1:]):
            samples.append((a[0][1] + b[0][0]) / 2)
        samples.append(items[-1][0][1] + 1)
    signs = [uv.sign(uv.evaluate(w, s)) for s in samples]
    if any(s == 0 for s in signs):
        raise AssertionError("sample point hit a root")
    return [(tuple(it[0]), it[1]) for it in items], signs


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)

    def count(self):
        return len({self.find(x) for x in self.parent})


def _level_curve_class(N, w, s):
    """β of the smooth affine curve ``{tau**N * w(t) = s, w(t) != 0}``.

    Arcs of real points live over the gaps between real roots of ``w``; the
    real places of the completion over each root and over ``t = oo`` glue arc
    ends.  The local model at such a place is ``tau**N = c * z**e``.
    """
    w = uv.trim(w)
    roots, signs = _real_root_layout(w)
    ngaps = len(signs)
    uf = _UnionFind()
    arcs = {}
    for k, sg in enumerate(signs):
        if N % 2:
            arcs[k] = [0]
        elif s * sg > 0:
            arcs[k] = [1, -1]
        else:
            arcs[k] = []
        for lab in arcs[k]:
            uf.add((k, lab))
    used = {}

    def use(k, lab, end):
        key = (k, lab, end)
        if (k, lab) not in uf.parent:
            raise AssertionError(f"gluing to a missing arc {key}")
        used[key] = used.get(key, 0) + 1

    places = []
    for i, (_, m) in enumerate(roots):
        places.append(((i, "R"), (i + 1, "L"), -m, s * signs[i + 1]))
    places.append(((0, "L"), (ngaps - 1, "R"), uv.degree(w), s * uv.sign(w[-1])))

    nplaces = 0
    for (lk, lend), (rk, rend), e, csign in places:
        g = gcd(N, abs(e))
        n1, e1 = N // g, e // g
        if g % 2:
            alphas = [csign]
        else:
            alphas = [1, -1] if csign > 0 else []
        for alpha in alphas:
            nplaces += 1
            if n1 % 2:
                if N % 2:
                    ra, la = (rk, 0), (lk, 0)
                else:
                    ra, la = (rk, alpha), (lk, alpha * (-1) ** (e1 % 2))
                use(*ra, rend)
                use(*la, lend)
                uf.union(ra, la)
            else:
                k, end = (rk, rend) if alpha > 0 else (lk, lend)
                use(k, 1, end)
                use(k, -1, end)
                uf.union((k, 1), (k, -1))
    expected = {(k, lab, end) for k in arcs for lab in arcs[k] for end in "LR"}
    if set(used) != expected or any(v != 1 for v in used.values()):
        raise AssertionError("inconsistent gluing of arc ends")
    return uf.count() * (U + 1) - nplaces


def _fibre_count(N, value, s):
    """Real solutions tau of tau**N * value = s for a nonzero rational value."""
    if N % 2:
        return 1
    return 2 if s * value > 0 else 0


def _check_unit(desc, base, w):
    rest = uv.remove_roots(list(w), desc.punctures)
    if base.branch:
        g = uv.gcd(uv.squarefree_part(rest), list(base.branch))
        if uv.degree(g) > 0:
            rest = uv.divmod_poly(rest, g)[0]
            rest = uv.remove_roots(rest, []) if rest else rest
            while uv.degree(uv.gcd(rest, g)) > 0:
                rest = uv.divmod_poly(rest, g)[0]
    if rest and uv.count_real_roots(rest):
        raise UnitVanishesOnStratum("unit has a real zero on the open stratum")


def beta_curve(desc):
    """β of a :class:`CurveDescriptor`."""
    if desc.kind == "points":
        return BetaPoly.const(desc.count)
    if desc.kind == "punctured-line":
        return U - desc.count
    if desc.kind != "superelliptic":
        raise UnsupportedShape(desc.kind)
    w = list(desc.w)
    if not w:
        raise UnitVanishesOnStratum("unit is identically zero")
    base = _LineBase(desc.punctures, list(desc.branch))
    base.check_branch_in_zeros(w)
    _check_unit(desc, base, w)
    if desc.target in ("=1", "=-1"):
        s = 1 if desc.target == "=1" else -1
        out = _level_curve_class(desc.N, w, s)
        for p in desc.punctures:
            val = uv.evaluate(w, p)
            if val:
                out = out - _fibre_count(desc.N, val, s)
        return out
    sgn = 1 if desc.target == ">0" else -1
    if desc.N % 2:
        # half-line fibres: {tau**N w > 0} ~ (u - 1)/2 times the base where w != 0
        return (U - 1).half() * (base.beta() - base.roots_inside(w))
    atom = FormulaAtom(line_punctures=desc.punctures, branch=desc.branch)
    return (U - 1) * beta_sign_recursion(atom, [sgn * c for c in w])


# formulas with one sign condition ----------------------------------------------

@dataclass(frozen=True)
class FormulaAtom:
    """A line coordinate ``t`` (minus punctures and branch roots) times a cofactor shape.

    Sign conditions act on ``t`` only.
    """

    line_punctures: tuple = ()
    branch: tuple = ()
    cofactor: object = Affine(0)

    @classmethod
    def affine(cls, k):
        if k < 1:
            raise UnsupportedShape("need at least one coordinate")
        return cls(cofactor=Affine(k - 1))

    @classmethod
    def torus(cls, k):
        if k < 1:
            raise UnsupportedShape("need at least one coordinate")
        return cls(line_punctures=(Fraction(0),), cofactor=Torus(k - 1))

    @classmethod
    def line(cls, punctures=(), branch=()):
        return cls(line_punctures=tuple(sorted(set(Fraction(p) for p in punctures))),
                   branch=tuple(_as_coeffs(branch)) if branch else ())

    def base(self):
        return _LineBase(tuple(Fraction(p) for p in self.line_punctures), list(self.branch))

    def beta(self):
        return self.base().beta() * beta_constructible(self.cofactor)


def _beta_zero_locus(atom, p):
    base = atom.base()
    if not p:
        return base.beta()
    return BetaPoly.const(base.roots_inside(p))


def beta_sign_recursion(atom, p):
    """β([A, p > 0]) = 1/4 β([A, p = z^2]) - 1/4 β([A, p = -z^2]) + 1/2 β([A, p != 0]).

    The classes on the right are reduced to curve classes: on ``p != 0`` the
    surface ``p = z^2`` is isomorphic to ``{s^2 p = 1}`` via ``s = 1/z``.
    """
    p = _as_coeffs(p)
    co = beta_constructible(atom.cofactor)
    if not p:
        return ZERO
    # factors without real zeros do not change the set {p > 0}
    p = uv.strip_definite_factors(p)
    base = atom.base()
    base.check_branch_in_zeros(p)
    zeros = base.roots_inside(p)

    def square_class(q):
        curve = CurveDescriptor.superelliptic(2, q, atom.line_punctures, "=1", atom.branch)
        return _level_on_base(curve) + zeros

    plus = square_class(p)
    minus = square_class(uv.neg(p))
    nonzero = base.beta() - zeros
    inner = BetaPoly({k: c / 4 for k, c in (plus - minus).coeffs.items()}) + nonzero.half()
    return inner * co


def _level_on_base(desc):
    """Like beta_curve for level targets, without the unit-vanishing check."""
    s = 1 if desc.target == "=1" else -1
    w = list(desc.w)
    out = _level_curve_class(desc.N, w, s)
    for p in desc.punctures:
        val = uv.evaluate(w, p)
        if val:
            out = out - _fibre_count(desc.N, val, s)
    return out


def beta_nonvanishing(atom, q):
    """β([A, q != 0]) through the curve {s*q(t) = 1}, isomorphic to it."""
    q = _as_coeffs(q)
    if not q:
        return ZERO
    curve = CurveDescriptor.superelliptic(1, q, atom.line_punctures, "=1", atom.branch)
    return _level_on_base(curve) * beta_constructible(atom.cofactor)


def verify_relations(atom, q):
    """Check [A, q=0] + [A, q!=0] = [A] and [A, q>0] + [A, q<0] + [A, q=0] = [A] under β."""
    q = _as_coeffs(q)
    whole = atom.beta()
    co = beta_constructible(atom.cofactor)
    zero = _beta_zero_locus(atom, q) * co
    if not q:
        return zero == whole
    nonzero = beta_nonvanishing(atom, q)
    pos = beta_sign_recursion(atom, q)
    neg = beta_sign_recursion(atom, uv.neg(q))
    return zero + nonzero == whole and pos + neg + zero == whole


def lefschetz_power(b, a):
    """β(L^a * class) = u^a * β(class)."""
    return b * BetaPoly.u(a)
