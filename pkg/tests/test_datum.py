import pytest

from kmlat import coxeter as cx
from kmlat import datum as dt
from kmlat.errors import InputError

from oracles import brute_force_center_order, gcd_pattern_sl2

QS = (2, 3, 4, 5, 7, 9)
A2_TILDE = dt.affine_a_gcm(3)


def test_pairing_reproduces_transpose():
    for D in (dt.simply_connected(A2_TILDE), dt.adjoint(A2_TILDE), dt.sl_n_datum(3)):
        n = D.gcm.rank
        assert D.pairing_matrix() == [[D.gcm[t, s] for t in range(n)] for s in range(n)]


def test_inconsistent_datum_rejected():
    with pytest.raises(InputError):
        dt.make_datum(dt.affine_a_gcm(2), [[2], [2]], [[1], [-1]])


def test_sl_data_shapes():
    assert dt.sl_n_datum(2).c == ((-2,), (2,))
    assert dt.sl_n_datum(3).lattice_rank == 2
    assert dt.coxeter_matrix(dt.sl_n_datum(2))[0, 1] == cx.INF


@pytest.mark.parametrize("q", QS)
def test_sl2_center_against_hom_enumeration(q):
    D = dt.sl_n_datum(2)
    assert dt.center_order(D, q) == brute_force_center_order([[-2], [2]], q) == gcd_pattern_sl2(q)


@pytest.mark.parametrize("q", QS)
def test_sl3_center_against_hom_enumeration(q):
    D = dt.sl_n_datum(3)
    assert dt.center_order(D, q) == brute_force_center_order([list(c) for c in D.c], q)


@pytest.mark.parametrize("q", QS)
def test_simply_connected_and_adjoint_centers(q):
    for D in (dt.simply_connected(A2_TILDE), dt.adjoint(A2_TILDE)):
        assert dt.center_order(D, q) == brute_force_center_order([list(c) for c in D.c], q)


def test_torus_order():
    assert dt.torus_order(dt.sl_n_datum(3), 4) == 9
    assert dt.torus_order(dt.simply_connected(A2_TILDE), 2) == 1
