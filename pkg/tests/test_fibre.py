from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from milnorfibre import fibre
from milnorfibre._gridkernel_py import classify as classify_py
from milnorfibre.errors import NotIsolated
from milnorfibre.fibre import fibre_topology, verify_cf412
from milnorfibre.polycore import Polynomial, parse_poly

# (arcs, circles, regions, chi_c) worked out by hand for the open disk
KNOWN = {
    ("x^2+y^2", "+1"): (0, 1, None, 0),   # a circle
    ("x^2+y^2", "-1"): (0, 0, None, 0),   # empty
    ("x^2+y^2", "pos"): (0, 1, 1, 0),     # punctured disk
    ("x^2+y^2", "neg"): (0, 0, 0, 0),
    ("x*y", "+1"): (2, 0, None, -2),      # two hyperbola branches
    ("x*y", "pos"): (2, 0, 2, 2),         # two open 2-cells
    ("y^2-x^3", "+1"): (1, 0, None, -1),
    ("y^2-x^3", "-1"): (1, 0, None, -1),
    ("x^2-y^2", "neg"): (2, 0, 2, 2),
}


@pytest.mark.parametrize("key", sorted(KNOWN))
def test_known_topology(key):
    text, sym = key
    rep = fibre_topology(parse_poly(text), sym)
    assert rep.stabilized
    assert rep.counts() == KNOWN[key]


@pytest.mark.parametrize("text", ["x^2+y^2", "x*y", "x^2-y^2", "y^2-x^3", "x^3-3*x*y^2", "y^2-x^2-x^3"])
def test_cf412_with_eta_halving(text):
    result = verify_cf412(parse_poly(text), eta_check=True)
    for sym, entry in result.items():
        assert entry["stabilized"], sym
        assert entry["eta_halved_same"], sym
        assert entry["pass"], (sym, entry["S"], entry["oracle_chi_c"])


def test_open_ball_convention():
    f = parse_poly("x*y")
    assert fibre_topology(f, "+1").chi_c == -2
    assert fibre_topology(f, "+1", closed_ball=True).chi_c == 2


def test_non_isolated_rejected():
    with pytest.raises(NotIsolated):
        fibre_topology(parse_poly("x^2*y"), "+1")


def test_single_resolution_is_not_stabilized():
    rep = fibre_topology(parse_poly("x*y"), "+1", resolution=64)
    assert not rep.stabilized and rep.grid_resolution == 64


def test_report_json():
    data = fibre_topology(parse_poly("y^2-x^3"), "pos").to_json()
    assert data["delta"] == "1/2" and data["milnor_data"] == "heuristic"
    assert data["kernel"] in ("compiled", "python")


@st.composite
def grid_polys(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)),
                                 st.fractions(min_value=-3, max_value=3, max_denominator=5),
                                 min_size=1, max_size=6))
    return Polynomial(terms)


def _exact_signs(f, coords, c):
    out = np.empty((len(coords), len(coords)), dtype=np.int8)
    for i, x in enumerate(coords):
        for j, y in enumerate(coords):
            v = f(x, y) - c
            out[i, j] = (v > 0) - (v < 0)
    return out


@given(grid_polys(), st.sampled_from([Fraction(0), Fraction(1, 100), Fraction(-1, 7)]))
@settings(max_examples=40)
def test_kernels_agree_with_exact_signs(f, c):
    grid = fibre._Grid(f, Fraction(1, 2), 8)
    exact = _exact_signs(f, grid.coords, c)
    for classify in {fibre._classify, classify_py}:
        raw = np.asarray(classify(grid.coeffs, grid.ex, grid.ey, grid.xs, grid.xs, float(c), grid.rel_err))
        decided = raw != 2
        assert np.array_equal(raw[decided], exact[decided])
    assert np.array_equal(grid.signs(c), exact)


def test_python_kernel_gives_same_reports(monkeypatch):
    f = parse_poly("y^2-x^3")
    compiled = [fibre_topology(f, s).counts() for s in ("+1", "-1", "pos", "neg")]
    monkeypatch.setattr(fibre, "_classify", classify_py)
    assert [fibre_topology(f, s).counts() for s in ("+1", "-1", "pos", "neg")] == compiled


def test_max_grid_from_env(monkeypatch):
    monkeypatch.setenv("MM_MAX_GRID", "64")
    rep = fibre_topology(parse_poly("x*y"), "+1")
    assert rep.grid_resolution <= 64
