"""Embedded resolution of plane curve germs by iterated point blowups.

Every exceptional component E is born at a blowup and keeps the two charts
created with it: chart A with ``(x, y) -> (a, a*b)`` where E is ``a = 0``
and its coordinate is ``b``, and chart B with ``(x, y) -> (a*b, b)`` where E
is ``b = 0`` and its coordinate is ``a = 1/b``.  Points of E are addressed by
their chart-A coordinate, with ``INF`` for the origin of chart B.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import univariate as uv
from .errors import (IrrationalCenter, NoPresentation, NonRationalCenter, NotAGerm,
                     ResolutionError)
from .polycore import INFINITY, Polynomial

INF = INFINITY
AB = ("a", "b")
MAX_BLOWUPS = 200


@dataclass(frozen=True)
class Slot:
    """A divisor component cut out by a chart coordinate, and where the chart origin sits on it."""

    component: str
    position: object


@dataclass(frozen=True)
class IrrationalPoint:
    """A real irrational point of a component, isolated by a rational interval."""

    poly: tuple
    lo: Fraction
    hi: Fraction

    def __str__(self):
        return f"root of {_uni_str(self.poly, 'b')} in ({self.lo}, {self.hi})"


@dataclass(frozen=True)
class Chart:
    id: str
    x: Polynomial
    y: Polynomial
    steps: tuple
    transform: Polynomial
    slots: tuple
    exps: tuple
    jac: tuple

    @property
    def divisor_exponents(self):
        out = {}
        for i, slot in enumerate(self.slots):
            if slot is not None:
                e = [0, 0]
                e[i] = self.exps[i]
                out[slot.component] = tuple(e)
        return out

    @property
    def jac_exponents(self):
        out = {}
        for i, slot in enumerate(self.slots):
            if slot is not None:
                e = [0, 0]
                e[i] = self.jac[i]
                out[slot.component] = tuple(e)
        return out

    @property
    def unit(self):
        return self.transform.divide_monomial(self.exps)

    def map_string(self):
        return f"x = {self.x}, y = {self.y}"


@dataclass(frozen=True)
class DivisorComponent:
    id: str
    N: int
    nu: int
    exceptional: bool


@dataclass(frozen=True)
class Presentation:
    """A stratum in one chart.

    For a curve stratum: the unit ``w`` in the chart coordinate, the rational
    punctures, and a ``branch`` polynomial whose real roots are also removed.
    For a point stratum: the constant unit value (``exact`` is False when only
    its sign is known, at irrational points).
    """

    chart: str
    w: tuple = ()
    punctures: tuple = ()
    branch: tuple = ()
    point: object = None
    value: Fraction = None
    exact: bool = True


@dataclass(frozen=True)
class Stratum:
    I: tuple
    dim: int
    N_I: int
    presentations: tuple

    def presentation(self, chart_id):
        for p in self.presentations:
            if p.chart == chart_id:
                return p
        raise NoPresentation(f"stratum {self.I} has no presentation in chart {chart_id}")


@dataclass
class ResolutionData:
    f: Polynomial
    charts: dict
    components: list
    strata: list
    dual_graph: dict
    euler_complex: dict = field(default_factory=dict)
    centers: tuple = ()
    strict_positions: dict = field(default_factory=dict)

    def component(self, cid):
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def exceptional(self):
        return [c for c in self.components if c.exceptional]

    def to_json(self):
        edges = sorted({tuple(sorted((a, b))) for a, nbrs in self.dual_graph.items() for b in nbrs})
        return {
            "components": [{"id": c.id, "N": c.N, "nu": c.nu, "exceptional": c.exceptional}
                           for c in self.components],
            "dual_graph": [list(e) for e in edges],
            "strata": [{"I": list(s.I), "dim": s.dim, "N_I": s.N_I,
                        "punctures": [_pos_str(p) for p in _stratum_punctures(s)]}
                       for s in self.strata],
            "charts": [{"id": ch.id, "map": ch.map_string(), "steps": list(ch.steps),
                        "divisor_exponents": {k: list(v) for k, v in sorted(ch.divisor_exponents.items())},
                        "jac_exponents": {k: list(v) for k, v in sorted(ch.jac_exponents.items())}}
                       for ch in self.charts.values()],
        }


def _stratum_punctures(s):
    if s.dim == 0:
        return []
    return list(s.presentations[0].punctures)


def _pos_str(p):
    if p == INF:
        return "oo"
    return str(p)


def _uni_str(coeffs, name):
    return str(Polynomial.from_univariate(list(coeffs), name, (name,)))


# chart arithmetic -------------------------------------------------------------

def _shift_a(p):
    """Substitute (a, b) -> (a, a*b) in a polynomial in (a, b)."""
    return Polynomial({(i + j, j): c for (i, j), c in p.terms.items()}, AB)


def _shift_b(p):
    """Substitute (a, b) -> (a*b, b)."""
    return Polynomial({(i, i + j): c for (i, j), c in p.terms.items()}, AB)


def _translate_poly(p, c):
    if c == 0:
        return p
    b = Polynomial.var("b", AB) + Polynomial.constant(c, AB)
    return p.substitute({"b": b}, AB)


def _order(p):
    return min(sum(e) for e in p.terms)


def translate(chart, c):
    """Move the point ``b = c`` of the chart's a-divisor to the origin."""
    c = Fraction(c)
    if c == 0:
        return chart
    sa = chart.slots[0]
    slot_a = Slot(sa.component, sa.position + c) if sa is not None else None
    return Chart(
        id=f"{chart.id}+{c}",
        x=_translate_poly(chart.x, c),
        y=_translate_poly(chart.y, c),
        steps=chart.steps + (f"b -> b + {c}",),
        transform=_translate_poly(chart.transform, c),
        slots=(slot_a, None),
        exps=(chart.exps[0], 0),
        jac=(chart.jac[0], 0),
    )


def blowup_chart(chart, center=(0, 0)):
    """Blow up the chart at a rational point; return the two new charts (A, B).

    The new exceptional component is ``a = 0`` in A and ``b = 0`` in B; it is
    registered under the placeholder id ``"new"``.
    """
    try:
        ca, cb = Fraction(center[0]), Fraction(center[1])
    except (TypeError, ValueError) as exc:
        raise NonRationalCenter(f"center {center!r} is not rational") from exc
    if ca != 0:
        raise NonRationalCenter("only centers on the b-axis of a chart are supported")
    return _blow(translate(chart, cb) if cb else chart, "new")


def _blow(chart, cid):
    F = chart.transform
    N = _order(F)
    ja, jb = chart.jac
    j = ja + jb + 1
    sa, sb = chart.slots
    A = Chart(
        id=f"{cid}.A",
        x=_shift_a(chart.x), y=_shift_a(chart.y),
        steps=chart.steps + ("(a, b) -> (a, a*b)",),
        transform=_shift_a(F),
        slots=(Slot(cid, Fraction(0)), sb),
        exps=(N, chart.exps[1]),
        jac=(j, jb),
    )
    B = Chart(
        id=f"{cid}.B",
        x=_shift_b(chart.x), y=_shift_b(chart.y),
        steps=chart.steps + ("(a, b) -> (a*b, b)",),
        transform=_shift_b(F),
        slots=(sa, Slot(cid, INF)),
        exps=(chart.exps[0], N),
        jac=(ja, j),
    )
    return A, B


def _leading_at(w, c):
    """(multiplicity, leading coefficient) of ``w`` at ``t = c``."""
    s = uv.shift(w, c)
    m = next(i for i, v in enumerate(s) if v)
    return m, s[m]


def _is_line_branch(G, m, var):
    """True if ``G = var**m * H`` with ``H(0, 0) != 0``."""
    if G.min_exponent(var) < m:
        return False
    e = (m, 0) if var == "a" else (0, m)
    return G.divide_monomial(e).constant_term() != 0


# the builder -------------------------------------------------------------------

class _Builder:
    def __init__(self, f):
        self.f = f
        self.N = {}
        self.nu = {}
        self.neighbors = {}
        self.creation = {}
        self.point_charts = {}
        self.order = []

    def _check_pullback(self, chart):
        direct = self.f.substitute({"x": chart.x, "y": chart.y}, AB)
        if direct != chart.transform:
            raise AssertionError(f"pullback identity fails in chart {chart.id}")
        mono = Polynomial.monomial(chart.exps, 1, AB)
        if mono * chart.unit != chart.transform:
            raise AssertionError(f"unit factorization fails in chart {chart.id}")

    def blowup(self, chart):
        if len(self.order) >= MAX_BLOWUPS:
            raise ResolutionError(f"no normal crossings after {MAX_BLOWUPS} blowups")
        cid = f"E{len(self.order) + 1}"
        N = _order(chart.transform)
        if N < 1:
            raise AssertionError("blowup center is not on the total transform")
        A, B = _blow(chart, cid)
        self._check_pullback(A)
        self._check_pullback(B)
        self.order.append(cid)
        self.N[cid] = N
        self.nu[cid] = A.jac[0] + 1
        self.creation[cid] = (A, B)
        self.neighbors[cid] = {}
        sa, sb = chart.slots
        if sa is not None and sb is not None:
            self.point_charts.pop(frozenset((sa.component, sb.component)), None)
        if sb is not None:
            self.neighbors[cid][Fraction(0)] = sb.component
            self.neighbors[sb.component][sb.position] = cid
            self.point_charts[frozenset((cid, sb.component))] = A
        if sa is not None:
            self.neighbors[cid][INF] = sa.component
            self.neighbors[sa.component][sa.position] = cid
            self.point_charts[frozenset((cid, sa.component))] = B
        return cid

    def bad_points(self, cid):
        """Charts centred at the points of a new component that still need blowing up."""
        A, B = self.creation[cid]
        N = self.N[cid]
        out = []
        sb = A.slots[1]
        G = A.unit
        if sb is not None and G.constant_term() == 0:
            out.append(A)
        w = G.restrict("a", 0).to_univariate("b")
        for m, fac in uv.squarefree_decomposition(w).items():
            if m < 2:
                continue
            roots = [c for c, _ in uv.rational_roots(fac)]
            if uv.degree(uv.remove_roots(fac, roots)) > 0:
                raise IrrationalCenter(
                    f"singular point of the strict transform on {cid} at a non-rational point")
            for c in roots:
                if sb is not None and c == 0:
                    continue
                T = translate(A, c)
                if not _is_line_branch(T.transform.divide_monomial((N, 0)), m, "b"):
                    out.append(T)
        sa = B.slots[0]
        GB = B.unit
        if sa is not None:
            if GB.constant_term() == 0:
                out.append(B)
        else:
            wB = GB.restrict("b", 0).to_univariate("a")
            m = uv.root_multiplicity(wB, 0)
            if m >= 2 and not _is_line_branch(GB, m, "a"):
                out.append(B)
        return out

    def run(self, start):
        queue = [self.blowup(start)]
        while queue:
            cid = queue.pop(0)
            for chart in self.bad_points(cid):
                queue.append(self.blowup(chart))

    def center_chart(self, center):
        first, second = center
        if first not in self.creation:
            raise NonRationalCenter(f"{first} is not an exceptional component")
        if isinstance(second, str) and second in self.creation:
            key = frozenset((first, second))
            if key not in self.point_charts:
                raise NonRationalCenter(f"{first} and {second} do not meet")
            return self.point_charts[key]
        pos = _as_position(second)
        A, B = self.creation[first]
        nbr = self.neighbors[first].get(pos)
        if nbr is not None:
            return self.point_charts[frozenset((first, nbr))]
        if pos == INF:
            return B
        return translate(A, pos)


def _as_position(p):
    if isinstance(p, str) and p.strip().lower() in ("oo", "inf", "infinity"):
        return INF
    if p == INF:
        return INF
    if isinstance(p, float):
        raise NonRationalCenter(f"center position {p!r} must be an exact rational")
    try:
        return Fraction(p)
    except (TypeError, ValueError) as exc:
        raise NonRationalCenter(f"center position {p!r} is not rational") from exc


def _identity_chart(f):
    a, b = Polynomial.var("a", AB), Polynomial.var("b", AB)
    return Chart(id="id", x=a, y=b, steps=(), transform=f.substitute({"x": a, "y": b}, AB),
                 slots=(None, None), exps=(0, 0), jac=(0, 0))


def _check_germ(f):
    if f.is_zero():
        raise NotAGerm("the zero polynomial is not a germ")
    if f.constant_term() != 0:
        raise NotAGerm("f does not vanish at the origin")
    if tuple(f.variables) != ("x", "y"):
        raise NotAGerm("germs live in the variables x, y")


def embedded_resolution(f, centers=()):
    """Resolve ``f`` and then blow up each extra center in turn.

    A center is ``(component_id, position)`` with a rational or ``"oo"``
    position on that component, or a pair of exceptional component ids.
    """
    _check_germ(f)
    builder = _Builder(f)
    builder.run(_identity_chart(f))
    for center in centers:
        chart = builder.center_chart(center)
        cid = builder.blowup(chart)
        queue = [cid]
        while queue:
            nxt = queue.pop(0)
            for ch in builder.bad_points(nxt):
                queue.append(builder.blowup(ch))
    return _assemble(builder, tuple(centers))


def extra_blowup(res, center):
    """A non-minimal resolution: ``res`` followed by one more point blowup.

    ``center`` is ``(E, position)``, a pair of exceptional ids, or
    ``(E, B)`` with ``B`` a strict-transform component meeting ``E``.
    """
    first, second = center
    if isinstance(second, str) and second in res.strict_positions:
        owner, pos = res.strict_positions[second]
        if owner != first:
            raise NonRationalCenter(f"{second} does not meet {first}")
        if isinstance(pos, IrrationalPoint):
            raise NonRationalCenter(f"{second} meets {first} at an irrational point")
        center = (first, pos)
    return embedded_resolution(res.f, res.centers + (center,))


def _sign_right_of_root(w, point):
    """Sign of ``w`` just to the right of a simple irrational root."""
    dw = uv.derivative(w)
    lo, hi = point.lo, point.hi
    poly = list(point.poly)
    while uv.count_roots(dw, lo, hi) or uv.evaluate(dw, hi) == 0:
        lo, hi = uv.refine(poly, (lo, hi), (hi - lo) / 2)
    return uv.sign(uv.evaluate(dw, (lo + hi) / 2))


def _assemble(builder, centers):
    components = []
    strata = []
    charts = {}
    graph = {}
    euler = {}
    strict_positions = {}
    strict_count = 0

    for cid in builder.order:
        components.append(DivisorComponent(cid, builder.N[cid], builder.nu[cid], True))
        graph.setdefault(cid, set())
        A, B = builder.creation[cid]
        charts[A.id] = A
        charts[B.id] = B
        for nbr in builder.neighbors[cid].values():
            graph[cid].add(nbr)
            graph.setdefault(nbr, set()).add(cid)

    for cid in builder.order:
        A, B = builder.creation[cid]
        N = builder.N[cid]
        wA = A.transform.divide_monomial((N, 0)).restrict("a", 0).to_univariate("b")
        wB = B.transform.divide_monomial((0, N)).restrict("b", 0).to_univariate("a")
        exc = builder.neighbors[cid]
        finite_exc = sorted(p for p in exc if p != INF)

        strict = []  # (position, multiplicity, unit value, exact)
        branch = [Fraction(1)]
        for m, fac in uv.squarefree_decomposition(wA).items():
            rat = [c for c, _ in uv.rational_roots(fac)]
            for c in rat:
                if c in exc:
                    continue
                mult, lead = _leading_at(wA, c)
                strict.append((c, mult, lead, True))
            rest = uv.remove_roots(fac, rat)
            if uv.degree(rest) > 0 and uv.count_real_roots(rest):
                if m > 1:
                    raise IrrationalCenter(f"non-reduced branch through an irrational point of {cid}")
                branch = uv.mul(branch, rest)
                for lo, hi in uv.isolate_real_roots(rest):
                    point = IrrationalPoint(tuple(rest), lo, hi)
                    strict.append((point, 1, Fraction(_sign_right_of_root(wA, point)), False))
        if INF not in exc and wB and uv.evaluate(wB, 0) == 0:
            mult, lead = _leading_at(wB, 0)
            strict.append((INF, mult, lead, True))

        for pos, mult, value, exact in strict:
            strict_count += 1
            bid = f"B{strict_count}"
            components.append(DivisorComponent(bid, mult, 1, False))
            graph[cid].add(bid)
            graph.setdefault(bid, set()).add(cid)
            strict_positions[bid] = (cid, pos)
            chart_id = B.id if pos == INF else A.id
            strata.append(Stratum((cid, bid), 0, gcd(N, mult),
                                  (Presentation(chart_id, point=pos, value=value, exact=exact),)))

        rational_strict = [p for p, *_ in strict if not isinstance(p, IrrationalPoint)]
        punct_a = sorted(set(finite_exc) | {p for p in rational_strict if p != INF})
        punct_b = sorted({1 / p for p in punct_a if p != 0}
                         | ({Fraction(0)} if INF in exc or INF in rational_strict else set()))
        branch = uv.trim(branch)
        branch_a = tuple(branch) if uv.degree(branch) > 0 else ()
        branch_b = tuple(uv.reverse(branch)) if branch_a else ()
        strata.append(Stratum((cid,), 1, N, (
            Presentation(A.id, w=tuple(wA), punctures=tuple(punct_a), branch=branch_a),
            Presentation(B.id, w=tuple(wB), punctures=tuple(punct_b), branch=branch_b),
        )))

        complex_rest = uv.squarefree_part(uv.remove_roots(wA, finite_exc))
        n_points = len(exc) + max(uv.degree(complex_rest), 0)
        if INF not in exc and wB and uv.evaluate(wB, 0) == 0:
            n_points += 1
        euler[cid] = 2 - n_points

    done = set()
    for cid in builder.order:
        for nbr in builder.neighbors[cid].values():
            key = frozenset((cid, nbr))
            if key in done:
                continue
            done.add(key)
            chart = builder.point_charts[key]
            value = chart.unit.constant_term()
            if value == 0:
                raise AssertionError(f"components {sorted(key)} meet at a non-normal-crossing point")
            I = tuple(sorted(key, key=lambda c: builder.order.index(c)))
            strata.append(Stratum(I, 0, gcd(builder.N[I[0]], builder.N[I[1]]),
                                  (Presentation(chart.id, point=(0, 0), value=value),)))

    strata.sort(key=lambda s: (s.dim == 0, _order_key(s.I, builder.order)))
    return ResolutionData(
        f=builder.f,
        charts=charts,
        components=components,
        strata=strata,
        dual_graph={k: sorted(v, key=_id_key) for k, v in sorted(graph.items(), key=lambda kv: _id_key(kv[0]))},
        euler_complex=euler,
        centers=centers,
        strict_positions=strict_positions,
    )


def _id_key(cid):
    return (cid[0] != "E", int(cid[1:]))


def _order_key(I, order):
    return tuple(_id_key(c) for c in I)


def unit_on_stratum(res, stratum, chart_id):
    """The unit of the pulled-back germ restricted to a stratum.

    Curve strata give a polynomial in the chart's coordinate along the
    component (``b`` in chart A, ``a`` in chart B); point strata give a constant.
    """
    pres = stratum.presentation(chart_id)
    if stratum.dim == 0:
        return Polynomial.constant(pres.value, ())
    name = "b" if chart_id.endswith(".A") else "a"
    return Polynomial.from_univariate(list(pres.w), name, (name,))
