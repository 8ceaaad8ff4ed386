import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmlat.errors import InputError
from kmlat.fields import GF, conway_style_modulus, factor_prime_power, field

MODULI = json.loads((Path(__file__).parent / "fixtures" / "moduli.json").read_text())
ORDERS = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 2), (7, 1)]


def test_prime_power_factorisation():
    assert factor_prime_power(9) == (3, 2)
    for bad in (1, 6, 12, 0):
        with pytest.raises(InputError):
            factor_prime_power(bad)


@pytest.mark.parametrize("key", sorted(MODULI))
def test_moduli_are_pinned(key):
    p, k = map(int, key.split("^"))
    assert list(conway_style_modulus(p, k)) == MODULI[key]


@pytest.mark.parametrize("p, k", ORDERS)
def test_multiplicative_group_is_cyclic_of_right_order(p, k):
    F = field(p, k)
    orders = {F.pow(a, F.q - 1) for a in F.nonzero()}
    assert orders == {1}
    # the nonzero elements are closed under multiplication and have inverses
    assert all(F.mul(a, F.inv(a)) == 1 for a in F.nonzero())


@pytest.mark.parametrize("p, k", ORDERS)
def test_frobenius_fixes_prime_field(p, k):
    F = field(p, k)
    assert sorted(F.subfield_elements(p)) == list(range(p))
    assert all(F.frobenius(a, k) == a for a in F.elements())


def elements_of(F):
    return st.integers(0, F.q - 1)


@pytest.mark.parametrize("p, k", [(2, 2), (3, 2), (2, 4), (5, 2)])
def test_field_axioms(p, k):
    F = field(p, k)

    @settings(max_examples=80, deadline=None)
    @given(elements_of(F), elements_of(F), elements_of(F))
    def check(a, b, c):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))

    check()


def test_check_rejects_out_of_range():
    with pytest.raises(InputError):
        GF(2, 2).check(4)
    with pytest.raises(InputError):
        GF(4)
