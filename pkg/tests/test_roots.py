import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmlat import coxeter as cx
from kmlat import roots as rt
from kmlat.errors import InputError, NonEmptyLeviPart, NotPrenilpotent

A2 = cx.validate_gcm([[2, -1], [-1, 2]])
A3 = cx.validate_gcm([[2, -1, 0], [-1, 2, -1], [0, -1, 2]])
D_INF = cx.validate_gcm([[2, -2], [-2, 2]])
A2_TILDE = cx.validate_gcm([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
HYPERBOLIC = cx.validate_gcm([[2, -2, 0], [-2, 2, -1], [0, -1, 2]])
RHO = (1, 1, 1)


def vectors(roots):
    return {r.vector for r in roots}


def test_make_root_records_reflection():
    r = rt.make_root(A2, (1, 1))
    assert r.reflection == cx.element(A2, (0, 1, 0))
    assert r.height == 2 and r.positive


def test_non_roots_rejected():
    assert not rt.is_real_root(A2, (1, 2))
    with pytest.raises(InputError):
        rt.make_root(A2, (2, 0))


def test_finite_root_counts():
    assert len(rt.all_roots_up_to_height(A2, 10)) == 6
    assert len(rt.all_roots_up_to_height(A3, 10)) == 12


def test_affine_real_roots_by_height():
    heights = [r.height for r in rt.roots_up_to_height(D_INF, 5)]
    # real roots of the affine A1 system are (k+1, k) and (k, k+1)
    assert heights == [1, 1, 3, 3, 5, 5]


def test_all_pairs_prenilpotent_in_a2():
    simple = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for a in simple[:2]:
        for b in simple[2:]:
            assert rt.is_prenilpotent(A2, a, b) is True


def test_a2_interval():
    iv = rt.interval(A2, (1, 0), (0, 1))
    assert vectors(iv.members) == {(1, 0), (1, 1), (0, 1)}
    assert iv.certified


def test_infinite_dihedral_pairs():
    assert rt.is_prenilpotent(D_INF, (1, 0), (0, 1)) is False
    assert rt.is_prenilpotent(D_INF, (1, 0), (0, -1)) is True
    assert rt.is_prenilpotent(D_INF, (-1, 0), (0, -1)) is False
    assert vectors(rt.interval(D_INF, (1, 0), (0, -1)).members) == {(1, 0), (0, -1)}
    with pytest.raises(NotPrenilpotent):
        rt.interval(D_INF, (1, 0), (0, 1))


def test_opposite_roots_not_prenilpotent():
    assert rt.is_prenilpotent(A2_TILDE, (1, 0, 0), (-1, 0, 0)) is False


@pytest.mark.parametrize("A", [A3, A2_TILDE, HYPERBOLIC], ids=["A3", "A2t", "hyp"])
def test_linear_interval_inside_interval(A):
    rng = random.Random(7)
    pool = rt.all_roots_up_to_height(A, 3)
    for _ in range(20):
        a, b = rng.sample(pool, 2)
        if rt.is_prenilpotent(A, a, b) is True:
            assert vectors(rt.linear_interval(A, a, b)) <= vectors(rt.interval(A, a, b).members)


def test_chamber_side_matches_inversions():
    w = cx.element(A2_TILDE, (0, 1))
    # w's chamber is on the negative side of exactly the inversion roots of w^-1
    negative = [r for r in rt.roots_up_to_height(A2_TILDE, 4) if rt.chamber_side(A2_TILDE, w, r) < 0]
    assert len(negative) == w.length


def test_phi_sets_generic_points():
    w = cx.element(A2_TILDE, (0, 1, 2, 0, 1))
    omega = rt.BalancedPair.from_images(RHO, cx.act_dual(A2_TILDE, w, RHO))
    phi_u, phi_m = rt.phi_sets(A2_TILDE, omega)
    assert (len(phi_m), len(phi_u)) == (0, 5)


def test_phi_sets_on_a_wall():
    omega = rt.BalancedPair.from_images(
        (0, Fraction(1, 2), Fraction(5, 2)), (0, Fraction(-19, 2), Fraction(25, 2))
    )
    phi_u, phi_m = rt.phi_sets(A2_TILDE, omega)
    assert (len(phi_m), len(phi_u)) == (2, 8)
    assert vectors(phi_m) == {(1, 0, 0), (-1, 0, 0)}
    with pytest.raises(NonEmptyLeviPart):
        rt.fixator_order_formula(A2_TILDE, omega, 2, 3)


def test_fixator_formula_generic():
    w = cx.element(A2_TILDE, (0, 1, 2))
    omega = rt.BalancedPair.from_images(RHO, cx.act_dual(A2_TILDE, w, RHO))
    assert rt.fixator_order_formula(A2_TILDE, omega, 3, 2) == 4 * 27


def test_balanced_pair_signs():
    with pytest.raises(InputError):
        rt.BalancedPair(rt.ApartmentPoint((1, 1)), rt.ApartmentPoint((1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12))
def test_unipotent_count_equals_length(word):
    w = cx.element(A2_TILDE, word)
    omega = rt.BalancedPair.from_images(RHO, cx.act_dual(A2_TILDE, w, RHO))
    phi_u, phi_m = rt.phi_sets(A2_TILDE, omega)
    assert not phi_m
    assert len(phi_u) == w.length


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=8), st.lists(st.integers(0, 2), max_size=8))
def test_phi_sets_are_w_equivariant(g, word):
    A = HYPERBOLIC
    g, w = cx.element(A, g), cx.element(A, word)
    x_minus = cx.act_dual(A, w, RHO)
    base = rt.phi_sets(A, rt.BalancedPair.from_images(RHO, x_minus))
    moved = rt.phi_sets(
        A, rt.BalancedPair.from_images(cx.act_dual(A, g, RHO), cx.act_dual(A, g, x_minus))
    )
    for before, after in zip(base, moved):
        assert vectors(after) == {cx.apply(A, g, r.vector) for r in before}
