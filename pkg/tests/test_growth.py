import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmlat import coxeter as cx
from kmlat import growth as gr
from kmlat.datum import affine_a_gcm
from kmlat.descent import fuchsian_gcm
from kmlat.errors import InputError

from oracles import brute_force_sphere_sizes, polygon_growth

POLYGONS = json.loads((Path(__file__).parent / "fixtures" / "polygon_growth.json").read_text())
D_INF = affine_a_gcm(2)
A2_TILDE = affine_a_gcm(3)
A2 = cx.validate_gcm([[2, -1], [-1, 2]])
G2 = cx.validate_gcm([[2, -1], [-3, 2]])


def test_infinite_dihedral_coefficients():
    assert gr.growth_coeffs(D_INF, 50).coeffs == (1,) + (2,) * 50


def test_affine_a2_against_matrix_bfs():
    assert list(gr.growth_coeffs(A2_TILDE, 12).coeffs) == brute_force_sphere_sizes(A2_TILDE.as_lists(), 12)


def test_pentagon_against_closed_form():
    assert list(gr.growth_coeffs(fuchsian_gcm(5), 10).coeffs) == polygon_growth(5, 10)


def test_rational_fits():
    assert str(gr.rational_series(D_INF, 30)) == "(t + 1)/(1 - t)"
    fit = gr.rational_series(A2_TILDE, 30)
    assert fit.coefficients(31) == list(gr.growth_coeffs(A2_TILDE, 30).coeffs)
    assert fit.denominator == (1, -2, 1)


def test_finite_type_series_is_the_poincare_polynomial():
    assert gr.rational_series(A2, 10).numerator == (1, 2, 2, 1)
    assert sum(gr.growth_coeffs(G2, 8).coeffs) == 12


def test_berlekamp_massey_fibonacci():
    fib = [1, 1]
    for _ in range(20):
        fib.append(fib[-1] + fib[-2])
    C, L = gr.berlekamp_massey(fib)
    assert L == 2 and C == [1, -1, -1]


def test_fit_unavailable_for_noise():
    assert gr.fit_rational([1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2], degree_bound=3) == gr.UNAVAILABLE


def test_dinf_partial_sum_is_exact():
    rep = gr.lattice_check(D_INF, 2, 20)
    assert rep.partial_sum == 3 - Fraction(1, 2**19)
    assert rep.verdict == "lattice"


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_finite_types_are_lattices(q):
    for A in (A2, G2):
        rep = gr.lattice_check(A, q, 20)
        assert rep.verdict == "lattice" and rep.finite
        assert rep.growth_rate_bounds == (0, 0)


def test_pentagon_threshold_matches_fixture():
    series = gr.growth_coeffs(fuchsian_gcm(5), 12)
    assert list(series.coeffs) == POLYGONS["5"]["coefficients"]
    verdicts = {q: gr.lattice_report(series, q, 5).verdict for q in (2, 3, 4, 5)}
    assert verdicts == {2: "not-lattice", 3: "lattice", 4: "lattice", 5: "lattice"}
    lo, _ = (Fraction(x) for x in POLYGONS["5"]["rate_bracket"])
    # ratios of this series decrease towards the rate, so the window's top dominates it
    assert gr.ratio_bounds(series.coeffs)[1] >= lo
    q_min = min(q for q, v in verdicts.items() if v == "lattice")
    assert q_min == POLYGONS["5"]["q_min"]


def test_short_series_rejected():
    with pytest.raises(InputError):
        gr.lattice_report(gr.growth_coeffs(A2_TILDE, 5), 2, 3)


def test_truncation_is_reported():
    rep = gr.lattice_check(fuchsian_gcm(5), 3, 40, budget=100_000)
    assert rep.truncated and rep.depth < 40


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 50), min_size=1, max_size=15), st.integers(2, 9))
def test_partial_sum_is_exact(coeffs, q):
    expected = sum(Fraction(d) / q**n for n, d in enumerate(coeffs))
    assert gr.partial_sum(coeffs, q) == expected


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_berlekamp_massey_recovers_rational_series(num, den_tail):
    series = gr.RationalSeries(tuple(map(Fraction, num)), (Fraction(1),) + tuple(map(Fraction, den_tail)))
    coeffs = series.coefficients(24)
    C, L = gr.berlekamp_massey(coeffs)
    assert L <= max(len(num), len(den_tail) + 1)
    for n in range(L, 24):
        assert sum(C[k] * coeffs[n - k] for k in range(L + 1)) == 0
