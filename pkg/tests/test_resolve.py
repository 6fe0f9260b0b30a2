from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from milnorfibre.errors import IrrationalCenter, NonRationalCenter, NotAGerm
from milnorfibre.polycore import Polynomial, milnor_number, parse_poly
from milnorfibre.resolve import embedded_resolution, extra_blowup

SAMPLES = ["x^2+y^2", "x*y", "x^2-y^2", "y^2-x^3", "x^3-3*x*y^2", "y^3-x^5", "y^2-x^2-x^3",
           "x^4+y^4", "x^2+y^4", "x^2*y^3", "x*y*(x-y)*(x+2*y)", "(y-x^2)*(y+x^2)"]


def _data(text):
    res = embedded_resolution(parse_poly(text))
    return sorted((c.N, c.nu, c.exceptional) for c in res.components)


def test_known_divisor_data():
    assert _data("y^2-x^3") == [(1, 1, False), (2, 2, True), (3, 3, True), (6, 5, True)]
    assert _data("x*y") == [(1, 1, False), (1, 1, False), (2, 2, True)]
    assert _data("x^2+y^2") == [(2, 2, True)]
    # ordinary m-fold point: one blowup, N = m, nu = 2
    assert _data("x*y*(x-y)*(x+2*y)") == [(1, 1, False)] * 4 + [(4, 2, True)]


def _det_jacobian(ch):
    a, b = ch.x.variables
    return ch.x.diff(a) * ch.y.diff(b) - ch.x.diff(b) * ch.y.diff(a)


@pytest.mark.parametrize("text", SAMPLES)
def test_chart_identities(text):
    res = embedded_resolution(parse_poly(text))
    for ch in res.charts.values():
        pulled = res.f.substitute({"x": ch.x, "y": ch.y}, ch.x.variables)
        assert pulled == ch.transform
        assert ch.unit * Polynomial.monomial(ch.exps, 1, ch.x.variables) == pulled
        # composed blowups have monomial Jacobian determinant up to sign
        det = _det_jacobian(ch)
        assert len(det.terms) == 1
        (exps, c), = det.terms.items()
        assert exps == tuple(ch.jac) and abs(c) == 1
        for cid, e in ch.divisor_exponents.items():
            comp = res.component(cid)
            assert comp.N == sum(e)
            assert comp.nu == sum(ch.jac_exponents[cid]) + 1


def _connected(nodes, graph):
    nodes = set(nodes)
    if not nodes:
        return True
    seen, stack = set(), [next(iter(nodes))]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack += [m for m in graph[n] if m in nodes]
    return seen == nodes


@pytest.mark.parametrize("text", SAMPLES)
def test_strata_invariants(text):
    res = embedded_resolution(parse_poly(text))
    exc = {c.id for c in res.exceptional}
    assert _connected(exc, res.dual_graph)
    points = [s for s in res.strata if s.dim == 0]
    curves = [s for s in res.strata if s.dim == 1]
    for s in res.strata:
        Ns = [res.component(i).N for i in s.I]
        g = 0
        for n in Ns:
            g = gcd(g, n)
        assert s.N_I == g
        assert len(s.I) == (2 if s.dim == 0 else 1)
        if set(s.I) & exc:
            assert s.presentations
    # one point stratum per dual-graph edge, and punctures match the neighbours
    edges = {frozenset((a, b)) for a, nb in res.dual_graph.items() for b in nb}
    assert {frozenset(s.I) for s in points} == edges
    for s in curves:
        (cid,) = s.I
        pres = s.presentations[0]
        rational = len(pres.punctures)
        assert rational <= len(res.dual_graph[cid])


@st.composite
def weighted_germs(draw):
    a, b = draw(st.integers(2, 5)), draw(st.integers(2, 5))
    c = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(3, 2)]))
    terms = {(a, 0): Fraction(1), (0, b): c}
    above = [(i, j) for i in range(6) for j in range(6) if i * b + j * a > a * b]
    for e in draw(st.lists(st.sampled_from(above), max_size=2)):
        terms[e] = terms.get(e, 0) + draw(st.sampled_from([Fraction(1), Fraction(-2)]))
    return Polynomial(terms)


@given(weighted_germs())
def test_acampo_euler_sum_matches_milnor(f):
    """sum N_i chi(E_i minus the other components) over the complex divisor is 1 - mu."""
    try:
        res = embedded_resolution(f)
    except IrrationalCenter:
        return
    total = sum(c.N * res.euler_complex[c.id] for c in res.exceptional)
    assert total == 1 - milnor_number(f)


def test_irrational_center_raised():
    with pytest.raises(IrrationalCenter):
        embedded_resolution(parse_poly("(x^2-2*y^2)^2+y^5"))


def test_not_a_germ():
    with pytest.raises(NotAGerm):
        embedded_resolution(parse_poly("x+1"))


def test_extra_blowups_change_data_predictably():
    res = embedded_resolution(parse_poly("x*y"))
    # free point on E1: new component with N = 2, nu = 3
    free = extra_blowup(res, ("E1", Fraction(2)))
    assert sorted((c.N, c.nu) for c in free.exceptional) == [(2, 2), (2, 3)]
    # corner of E1 and a strict branch: N = 2 + 1, nu = 2 + 1
    corner = extra_blowup(res, ("E1", "B1"))
    assert sorted((c.N, c.nu) for c in corner.exceptional) == [(2, 2), (3, 3)]
    with pytest.raises(NonRationalCenter):
        extra_blowup(embedded_resolution(parse_poly("y^2-x^3")), ("E1", "B1"))


def test_json_shape():
    data = embedded_resolution(parse_poly("y^2-x^3")).to_json()
    assert {c["id"] for c in data["components"]} == {"E1", "E2", "E3", "B1"}
    assert ["E1", "E3"] in data["dual_graph"]
    assert all({"I", "dim", "N_I", "punctures"} <= set(s) for s in data["strata"])
    assert all("map" in ch for ch in data["charts"])
