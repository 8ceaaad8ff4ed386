"""Kac-Moody root data and the orders of their split tori and centers over F_q.

The lattice is always Z^rank.  ``c[s]`` is the character c_s written as a
row vector, ``h[s]`` the cocharacter h_s, and the pairing is the dot product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import sympy
from sympy.matrices.normalforms import invariant_factors

from . import coxeter as cx
from .errors import InputError


@dataclass(frozen=True)
class KacMoodyRootDatum:
    gcm: cx.GeneralizedCartanMatrix
    lattice_rank: int
    c: tuple
    h: tuple

    def __post_init__(self):
        n = self.gcm.rank
        if len(self.c) != n or len(self.h) != n:
            raise InputError("need one character and one cocharacter per generator")
        for vec in self.c + self.h:
            if len(vec) != self.lattice_rank:
                raise InputError("vector length does not match lattice rank")
        for s in range(n):
            for t in range(n):
                if _dot(self.c[s], self.h[t]) != self.gcm[t, s]:
                    raise InputError(f"<c_{s}, h_{t}> != A[{t}][{s}]")

    def pairing_matrix(self):
        """Matrix P with P[s][t] = <c_s, h_t>, which equals the transpose of A."""
        n = self.gcm.rank
        return [[_dot(self.c[s], self.h[t]) for t in range(n)] for s in range(n)]


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def make_datum(gcm, c, h):
    c = tuple(tuple(int(x) for x in row) for row in c)
    h = tuple(tuple(int(x) for x in row) for row in h)
    rank = len(c[0]) if c else 0
    return KacMoodyRootDatum(gcm, rank, c, h)


def simply_connected(A):
    """Cocharacters h_s form the standard basis; c_s is column s of A."""
    n = A.rank
    h = [[int(s == t) for t in range(n)] for s in range(n)]
    c = [[A[t, s] for t in range(n)] for s in range(n)]
    return make_datum(A, c, h)


def adjoint(A):
    """Characters c_s form the standard basis; h_t is row t of A."""
    n = A.rank
    c = [[int(s == t) for t in range(n)] for s in range(n)]
    h = [[A[t, s] for s in range(n)] for t in range(n)]
    return make_datum(A, c, h)


def affine_a_gcm(n):
    """The affine matrix of type A_{n-1}^{(1)} on labels 0..n-1."""
    if n < 2:
        raise InputError("n must be >= 2")
    if n == 2:
        return cx.validate_gcm([[2, -2], [-2, 2]])
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 2
        rows[i][(i + 1) % n] = -1
        rows[(i + 1) % n][i] = -1
    return cx.validate_gcm(rows)


def sl_n_datum(n):
    """The root datum of SL_n over Laurent polynomials.

    Over the weight lattice of the finite A_{n-1} part, c_i and h_i
    (1 <= i < n) are the usual simple roots and coroots, and the affine
    generator gets c_0 = -sum c_i and h_0 = -sum h_i.
    """
    A = affine_a_gcm(n)
    r = n - 1
    finite = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)]
    h_fin = [[int(i == j) for j in range(r)] for i in range(r)]
    c_fin = [[finite[j][i] for j in range(r)] for i in range(r)]
    c0 = [-sum(row[k] for row in c_fin) for k in range(r)]
    h0 = [-sum(row[k] for row in h_fin) for k in range(r)]
    return make_datum(A, [c0] + c_fin, [h0] + h_fin)


def torus_order(datum, q):
    return (q - 1) ** datum.lattice_rank


def center_order(datum, q):
    """Number of t in Hom(Lambda, F_q^x) killed by every c_s.

    With invariant factors d_1..d_k of the character matrix this is
    prod gcd(q-1, d_i) times (q-1) for each of the rank-k free directions.
    """
    rank = datum.lattice_rank
    if rank == 0:
        return 1
    M = sympy.Matrix([list(row) for row in datum.c]) if datum.c else sympy.zeros(1, rank)
    factors = [abs(int(d)) for d in invariant_factors(M) if d != 0]
    order = (q - 1) ** (rank - len(factors))
    for d in factors:
        order *= math.gcd(q - 1, d)
    return order


def coxeter_matrix(datum):
    return cx.coxeter_of_gcm(datum.gcm)
