import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmlat import coxeter as cx
from kmlat import laurent as ls
from kmlat.datum import affine_a_gcm
from kmlat.errors import DegreeBudgetExceeded, NotUnimodular
from kmlat.fields import field

F2, F3, F4 = field(2), field(3), field(2, 2)


def poly(F, terms):
    return ls.LaurentPoly(F, terms)


def test_laurent_poly_arithmetic():
    t = poly(F3, {1: 1})
    one = poly(F3, {0: 1})
    assert (t + one) * (t - one) == poly(F3, {2: 1, 0: 2})
    assert t.inverse() * t == one


def test_non_unimodular_rejected():
    with pytest.raises(NotUnimodular):
        ls.LaurentMatrix.from_terms(F3, 2, {(0, 0): {0: 2}, (1, 1): {0: 1}})


def test_degree_budget():
    with ls.degree_budget(4):
        with pytest.raises(DegreeBudgetExceeded):
            poly(F2, {5: 1})


def test_generators_have_expected_weyl_images():
    assert ls.bruhat_decompose(ls.gen_lift(F2, 2, 0)).w.word == (0,)
    assert ls.bruhat_decompose(ls.gen_x(F2, 2, 0, 1)).w.word == ()


def test_affine_permutation_words_round_trip():
    A = affine_a_gcm(3)
    for _, sphere in cx.ball(A, 4):
        for w in sphere:
            assert ls.weyl_of_affine(ls.affine_of_word(3, w.word)) == w
            assert ls.affine_of_word(3, w.word).length() == w.length


@pytest.mark.parametrize("F, n", [(F2, 2), (F3, 2), (F4, 2), (F2, 3), (F3, 3)])
@pytest.mark.parametrize("sign", ["+", "-"])
def test_bruhat_recomposes(F, n, sign):
    rng = random.Random(3)
    for _ in range(25):
        M = ls.random_element(F, n, rng)
        fac = ls.bruhat_decompose(M, sign)
        assert fac.recompose() == M
        assert ls.in_borel(fac.b, sign)
        other = "-" if sign == "+" else "+"
        assert ls.in_unipotent(fac.u, sign)
        assert ls.in_unipotent(fac.w_hat.inverse() @ fac.u @ fac.w_hat, other)


@pytest.mark.parametrize("q", [2, 3])
def test_refined_bruhat_cells(q):
    rep = ls.verify_refined_bruhat(q, 3 if q == 2 else 2)
    assert rep.ok
    assert {len(w) for w in rep.cell_sizes} == set(range(rep.max_len + 1))
    assert all(size == q ** len(w) for w, size in rep.cell_sizes.items())


def test_codistance_basics():
    I = ls.identity(F2, 2)
    assert ls.codistance(I, I).word == ()
    assert ls.codistance(I, ls.gen_lift(F2, 2, 1)).word == (1,)


@pytest.mark.parametrize("F, n", [(F2, 2), (F3, 3)])
def test_codistance_twin_symmetry(F, n):
    A = affine_a_gcm(n)
    rng = random.Random(11)
    for _ in range(30):
        g, h = ls.random_element(F, n, rng), ls.random_element(F, n, rng)
        assert ls.codistance_negative(h, g) == cx.inverse(A, ls.codistance(g, h))


def test_codistance_is_invariant_under_the_group():
    rng = random.Random(5)
    for _ in range(20):
        g, h, x = (ls.random_element(F2, 2, rng) for _ in range(3))
        assert ls.codistance(x @ g, x @ h) == ls.codistance(g, h)


@pytest.mark.parametrize("F", [F2, F3])
def test_thickness_at_nearby_panels(F):
    A = affine_a_gcm(2)
    for _, sphere in cx.ball(A, 2):
        for w in sphere:
            g = ls.canonical_lift(F, 2, w)
            for s in range(2):
                assert ls.thickness_at_panel(g, s, F.q) == F.q + 1


def test_thickness_formula_mode():
    g = ls.identity(field(5), 3)
    assert ls.thickness_at_panel(g, 0, 5, mode="formula") == 6


@pytest.mark.parametrize("q", [2, 3])
def test_fixator_orders(q):
    F = field(q)
    A = affine_a_gcm(2)
    for _, sphere in cx.ball(A, 3):
        for w in sphere:
            assert ls.fixator_order(F, 2, w) == (q - 1) * q**w.length


@pytest.mark.parametrize("q", [2, 3])
def test_opposite_borels_meet_in_the_torus(q):
    F = field(q)
    I = ls.identity(F, 3)
    found = ls.stabilizer_intersection(I, I)
    assert len(found) == (q - 1) ** 2
    torus = [ls.gen_torus(F, 3, p) for p in product(F.nonzero(), repeat=2)]
    members = [D for D in torus if ls.in_borel(D, "+") and ls.in_borel(D, "-")]
    assert set(found) == set(members)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_inverse_and_determinant(seed):
    rng = random.Random(seed)
    M = ls.random_element(F3, 3, rng)
    assert M @ M.inverse() == ls.identity(F3, 3)
    assert M.det() == poly(F3, {0: 1})


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_bruhat_cell_is_well_defined_on_cosets(seed):
    rng = random.Random(seed)
    M = ls.random_element(F2, 2, rng)
    b = ls.random_borel(F2, 2, "+", rng)
    assert ls.bruhat_decompose(M @ b).w == ls.bruhat_decompose(M).w
