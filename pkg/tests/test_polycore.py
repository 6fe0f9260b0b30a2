from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from milnorfibre.errors import DegreeBoundExceeded, PolySyntaxError, UnknownVariable
from milnorfibre.polycore import (INFINITY, GermFamily, Polynomial, linear_change, milnor_number,
                                  order_at_origin, parse_poly, specialize)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, max_terms=5, max_deg=4):
    terms = draw(st.dictionaries(
        st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), rationals, max_size=max_terms))
    return Polynomial(terms)


def test_parse_examples():
    assert parse_poly("x^2 + y^2").terms == {(2, 0): 1, (0, 2): 1}
    assert parse_poly("x*y - x*y").is_zero()
    assert parse_poly("1/2*x^3*y - y^5").terms == {(3, 1): Fraction(1, 2), (0, 5): -1}


def test_parse_nested_and_powers():
    assert parse_poly("(x - y)^2") == parse_poly("x^2 - 2*x*y + y^2")
    assert parse_poly("-(x + 1/3)*3") == parse_poly("-3*x - 1")


@pytest.mark.parametrize("text, pos", [("x + * y", 4), ("x^", 2), ("(x + y", 6), ("2x", 1)])
def test_syntax_error_position(text, pos):
    with pytest.raises(PolySyntaxError) as info:
        parse_poly(text)
    assert info.value.position == pos


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as info:
        parse_poly("x + z")
    assert info.value.name == "z" and info.value.position == 4


@given(polys())
def test_print_parse_roundtrip(f):
    g = parse_poly(str(f))
    assert g == f
    assert str(g) == str(f)


@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f and f * g == g * f
    assert (f - f).is_zero()


def test_order_examples():
    assert order_at_origin(parse_poly("x^2 + y^3")) == 2
    assert order_at_origin(parse_poly("x*y")) == 2
    assert order_at_origin(Polynomial()) == INFINITY


@given(polys(), polys())
def test_order_is_additive(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert order_at_origin(f * g) == order_at_origin(f) + order_at_origin(g)


def test_milnor_examples():
    assert milnor_number(parse_poly("x^2 + y^2")) == 1
    assert milnor_number(parse_poly("y^2 - x^3")) == 2
    assert milnor_number(parse_poly("x^2*y")) == INFINITY
    assert milnor_number(parse_poly("x*y")) == 1
    assert milnor_number(parse_poly("(x^2 - y^3)^2")) == INFINITY


def test_milnor_degree_bound():
    with pytest.raises(DegreeBoundExceeded):
        milnor_number(parse_poly("x^10 + y^10"), degree_bound=4)


@st.composite
def semi_quasi_homogeneous(draw):
    """x^a + c y^b plus terms strictly above the Newton line; mu = (a-1)(b-1)."""
    a, b = draw(st.integers(2, 6)), draw(st.integers(2, 6))
    c = draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2, 3), Fraction(-5, 2)]))
    terms = {(a, 0): Fraction(1), (0, b): c}
    above = [(i, j) for i in range(0, 8) for j in range(0, 8) if i * b + j * a > a * b]
    for e in draw(st.lists(st.sampled_from(above), max_size=3)):
        terms[e] = terms.get(e, 0) + draw(rationals)
    return Polynomial(terms), (a - 1) * (b - 1)


@given(semi_quasi_homogeneous())
def test_milnor_matches_weighted_formula(case):
    f, mu = case
    assert milnor_number(f) == mu


invertible = st.tuples(rationals, rationals, rationals, rationals).filter(
    lambda m: m[0] * m[3] != m[1] * m[2]).map(lambda m: [[m[0], m[1]], [m[2], m[3]]])


@given(st.sampled_from(["x^2+y^2", "y^2-x^3", "x^3-3*x*y^2", "x^2*y+y^4", "x^2*y"]), invertible)
def test_milnor_linear_invariance(text, m):
    f = parse_poly(text)
    assert milnor_number(linear_change(f, m)) == milnor_number(f)


def test_specialize_examples():
    fam = GermFamily.parse("x^2 - t*y^2")
    assert specialize(fam, 1) == parse_poly("x^2 - y^2")
    assert specialize(fam, 0) == parse_poly("x^2")
    cubic = GermFamily.parse("x*(x-y)*(x-t*y)")
    assert specialize(cubic, 2) == parse_poly("x^3 - 3*x^2*y + 2*x*y^2")


def test_family_must_vanish_on_origin_line():
    with pytest.raises(ValueError):
        GermFamily.parse("x^2 + t")


def test_polynomial_immutable_and_hashable():
    f = parse_poly("x + y")
    with pytest.raises(AttributeError):
        f.terms = {}
    assert hash(f) == hash(parse_poly("y + x"))
