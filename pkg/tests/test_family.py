from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from milnorfibre.family import detect_breakpoints, evaluate_sample, scan
from milnorfibre.polycore import GermFamily
from milnorfibre.zeta import Symbol

FAMILIES = ["x^2 - t*y^2", "x*(x-y)*(x-t*y)", "y^2 - x^3 + t*x^2", "x^2 + t*y^2 + y^3"]


def _mirror(text):
    return text.replace("t", "(-t)")


def test_quadratic_family():
    rep = scan(GermFamily.parse("x^2 - t*y^2"), -2, 2, 17, Symbol.plus1)
    assert rep.breakpoints == [0]
    assert [str(iv[2]) for iv in rep.intervals] == ["u + 1", "-u + 1"]
    assert rep.label == "candidate stratification"


def test_three_lines_family():
    rep = scan(GermFamily.parse("x*(x-y)*(x-t*y)"), -2, 2, 17, Symbol.plus1)
    assert rep.breakpoints == [0, 1]
    assert {str(iv[2]) for iv in rep.intervals} == {"-2*u + 1"}
    failed = {s.t: s.failure for s in rep.samples if not s.ok}
    assert failed == {Fraction(0): "not-isolated", Fraction(1): "not-isolated"}


def test_constant_family_has_no_breakpoints():
    fam = GermFamily.parse("x^2 + y^2 + 0*t")
    assert detect_breakpoints(fam) == []
    rep = scan(fam, -1, 1, 5, "pos")
    assert rep.breakpoints == [] and len(rep.intervals) == 1


@pytest.mark.parametrize("text", FAMILIES)
def test_detected_breakpoints_are_sample_breakpoints(text):
    rep = scan(GermFamily.parse(text), -2, 2, 9, Symbol.plus1)
    assert set(rep.detected) <= set(rep.breakpoints)


@pytest.mark.parametrize("text", FAMILIES)
@pytest.mark.parametrize("sym", ["+1", "pos"])
def test_mirror_symmetry(text, sym):
    a = scan(GermFamily.parse(text), Fraction(-3, 2), 2, 9, sym)
    b = scan(GermFamily.parse(_mirror(text)), -2, Fraction(3, 2), 9, sym)
    assert sorted(-t for t in a.breakpoints) == b.breakpoints
    assert {(-s.t, s.beta, s.failure) for s in a.samples} == {(s.t, s.beta, s.failure) for s in b.samples}


@given(st.sampled_from(FAMILIES), st.data())
@settings(max_examples=15)
def test_intervals_constant_on_resampling(text, data):
    fam = GermFamily.parse(text)
    rep = scan(fam, -2, 2, 9, Symbol.plus1)
    for lo, hi, beta in rep.intervals:
        if lo == hi:
            continue
        for _ in range(3):
            t = data.draw(st.fractions(min_value=lo, max_value=hi, max_denominator=97))
            assert evaluate_sample(fam, t, Symbol.plus1).beta == beta


def test_parallel_scan_matches_serial():
    fam = GermFamily.parse("x*(x-y)*(x-t*y)")
    serial = scan(fam, -2, 2, 9, "neg")
    parallel = scan(fam, -2, 2, 9, "neg", jobs=2)
    assert serial.to_json() == parallel.to_json()


def test_csv_columns():
    rows = scan(GermFamily.parse("x^2 - t*y^2"), -1, 1, 3, "+1").to_csv().splitlines()
    assert rows[0] == "t,beta,status"
    assert "0,,not-isolated" in rows


def test_bad_ranges():
    fam = GermFamily.parse("x^2 - t*y^2")
    with pytest.raises(ValueError):
        scan(fam, 1, 1, 5, "+1")
    with pytest.raises(ValueError):
        scan(fam, 0, 1, 1, "+1")
