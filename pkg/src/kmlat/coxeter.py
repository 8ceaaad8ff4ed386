"""Exact arithmetic in the Weyl group of a generalized Cartan matrix.

Elements are stored as their ShortLex normal form: the lexicographically least
reduced word under the input generator order.  Internally an element ``w`` is
identified with the integer vector ``w . rho`` in the dual space V*, where
``rho`` is the point with every simple-root coordinate equal to 1.  The Weyl
group acts simply transitively on the chambers of the Tits cone, so this
vector determines ``w`` and its signs give the left descents.

All arithmetic is on Python integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import sympy

from .errors import (
    AsymmetricZero,
    DimensionMismatch,
    InputError,
    NonTwoDiagonal,
    PositiveOffDiagonal,
    ResourceBudgetExceeded,
)

INF = math.inf
"""Sentinel for an infinite Coxeter matrix entry (serialized as ``"inf"``)."""

DEFAULT_BUDGET = 10**6


class _ExceedsCutoff:
    """Singleton verdict: no relation was found below the requested cutoff."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXCEEDS_CUTOFF"

    def __reduce__(self):
        return (_ExceedsCutoff, ())


EXCEEDS_CUTOFF = _ExceedsCutoff()


@dataclass(frozen=True)
class GeneralizedCartanMatrix:
    """A validated generalized Cartan matrix.  Build it with :func:`validate_gcm`."""

    labels: tuple
    entries: tuple

    @property
    def rank(self):
        return len(self.labels)

    def __getitem__(self, key):
        s, t = key
        return self.entries[s][t]

    def submatrix(self, J):
        J = sorted(J)
        return GeneralizedCartanMatrix(
            tuple(self.labels[j] for j in J),
            tuple(tuple(self.entries[s][t] for t in J) for s in J),
        )

    def as_lists(self):
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class CoxeterMatrix:
    labels: tuple
    entries: tuple

    @property
    def rank(self):
        return len(self.labels)

    def __getitem__(self, key):
        s, t = key
        return self.entries[s][t]


@dataclass(frozen=True, order=True)
class WeylElement:
    """A Weyl group element given by its normal-form word.

    Equality of elements is equality of words, because every constructor in
    this module returns the canonical reduced word.
    """

    word: tuple = ()

    @property
    def length(self):
        return len(self.word)

    def __len__(self):
        return len(self.word)


IDENTITY = WeylElement(())


def _default_labels(n):
    return tuple(str(i) for i in range(n))


def validate_gcm(matrix, labels=None):
    """Check the generalized Cartan matrix axioms and return the validated matrix.

    Raises :class:`NonTwoDiagonal`, :class:`PositiveOffDiagonal` or
    :class:`AsymmetricZero` carrying the index of the first offending entry.
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("GCM must be square")
    labels = _default_labels(n) if labels is None else tuple(str(x) for x in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise InputError("labels must be distinct and match the matrix size")
    for s in range(n):
        for t in range(n):
            v = rows[s][t]
            if isinstance(v, bool) or int(v) != v:
                raise InputError(f"non-integer entry at {(s, t)}")
            rows[s][t] = int(v)
    for s in range(n):
        if rows[s][s] != 2:
            raise NonTwoDiagonal((s, s))
    for s in range(n):
        for t in range(n):
            if s != t and rows[s][t] > 0:
                raise PositiveOffDiagonal((s, t))
    for s in range(n):
        for t in range(n):
            if s != t and rows[s][t] == 0 and rows[t][s] != 0:
                raise AsymmetricZero((s, t))
    return GeneralizedCartanMatrix(labels, tuple(tuple(r) for r in rows))


_PRODUCT_TO_M = {0: 2, 1: 3, 2: 4, 3: 6}


def coxeter_of_gcm(A):
    n = A.rank
    rows = []
    for s in range(n):
        row = []
        for t in range(n):
            if s == t:
                row.append(1)
            else:
                row.append(_PRODUCT_TO_M.get(A[s, t] * A[t, s], INF))
        rows.append(tuple(row))
    return CoxeterMatrix(A.labels, tuple(rows))


_M_TO_PAIR = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}


def validate_coxeter(matrix, labels=None):
    rows = [list(r) for r in matrix]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("Coxeter matrix must be square")
    labels = _default_labels(n) if labels is None else tuple(str(x) for x in labels)
    if len(labels) != n or len(set(labels)) != n:
        raise InputError("labels must be distinct and match the matrix size")
    for s in range(n):
        for t in range(n):
            v = rows[s][t]
            if v == "inf" or v == INF:
                rows[s][t] = INF
            elif isinstance(v, bool) or not isinstance(v, int):
                raise InputError(f"bad Coxeter entry {v!r} at {(s, t)}")
        if rows[s][s] != 1:
            raise InputError(f"Coxeter diagonal must be 1 at {(s, s)}")
    for s in range(n):
        for t in range(n):
            if rows[s][t] != rows[t][s]:
                raise InputError(f"Coxeter matrix not symmetric at {(s, t)}")
            if s != t and rows[s][t] not in (2, 3, 4, 6, INF):
                raise InputError(f"unsupported Coxeter entry {rows[s][t]} at {(s, t)}")
    return CoxeterMatrix(labels, tuple(tuple(r) for r in rows))


def gcm_of_coxeter(M):
    """Canonical integer lift of a crystallographic Coxeter matrix.

    For ``s < t`` the entry of smaller absolute value sits in row ``s``.
    """
    n = M.rank
    rows = [[2 if s == t else 0 for t in range(n)] for s in range(n)]
    for s, t in combinations(range(n), 2):
        m = M[s, t]
        a, b = (-2, -2) if m == INF else _M_TO_PAIR[m]
        rows[s][t], rows[t][s] = a, b
    return validate_gcm(rows, M.labels)


def as_gcm(A_or_M):
    if isinstance(A_or_M, GeneralizedCartanMatrix):
        return A_or_M
    if isinstance(A_or_M, CoxeterMatrix):
        return gcm_of_coxeter(A_or_M)
    raise TypeError(f"expected a GCM or Coxeter matrix, got {type(A_or_M).__name__}")


@lru_cache(maxsize=256)
def _neighbours(A):
    """For each s, the pairs (t, A[s][t]) with t != s and a nonzero entry."""
    n = A.rank
    return tuple(
        tuple((t, A[s, t]) for t in range(n) if t != s and A[s, t] != 0) for s in range(n)
    )


def _act_dual(nb, s, y):
    """Return s . y for y in V* (in simple-root coordinates y_t = a_t(y))."""
    y = list(y)
    ys = y[s]
    y[s] = -ys
    if ys:
        for t, a in nb[s]:
            y[t] -= a * ys
    return y


def _act_root(A, s, v):
    """Return s . v for v in the root lattice, using s.a_t = a_t - A_st a_s."""
    v = list(v)
    v[s] -= sum(A[s, t] * v[t] for t in range(len(v)))
    return v


def _check_index(A, s):
    if not 0 <= s < A.rank:
        raise DimensionMismatch(f"generator index {s} out of range for rank {A.rank}")


def _dual_of_word(A, word, y=None):
    """Act on y (default rho) by the word, rightmost letter first."""
    nb = _neighbours(A)
    y = [1] * A.rank if y is None else list(y)
    for s in reversed(word):
        _check_index(A, s)
        y = _act_dual(nb, s, y)
    return y


def _normal_form_from_dual(A, y):
    """ShortLex word of the element w with w . rho = y."""
    nb = _neighbours(A)
    word = []
    y = list(y)
    while True:
        for s, ys in enumerate(y):
            if ys < 0:
                break
        else:
            return tuple(word)
        word.append(s)
        y = _act_dual(nb, s, y)


def element(A, word=()):
    """Return the element represented by an arbitrary word, in normal form."""
    return WeylElement(_normal_form_from_dual(A, _dual_of_word(A, tuple(word))))


def generator(A, s):
    _check_index(A, s)
    return WeylElement((s,))


def _word(w):
    return tuple(w.word) if isinstance(w, WeylElement) else tuple(w)


def multiply(A, u, v):
    """Product of two elements; plain words are accepted for either factor."""
    return element(A, _word(u) + _word(v))


def inverse(A, w):
    return element(A, tuple(reversed(_word(w))))


def power(A, w, k):
    if k < 0:
        w, k = inverse(A, w), -k
    return element(A, tuple(w.word) * k)


def apply(A, w, v):
    """Act by w on a root-lattice vector, one letter at a time."""
    v = list(v)
    if len(v) != A.rank:
        raise DimensionMismatch(f"vector of length {len(v)} for rank {A.rank}")
    for s in reversed(w.word):
        _check_index(A, s)
        v = _act_root(A, s, v)
    return tuple(v)


def act_dual(A, w, y):
    """Act by w on a point of V* given in simple-root coordinates."""
    if len(y) != A.rank:
        raise DimensionMismatch(f"vector of length {len(y)} for rank {A.rank}")
    return tuple(_dual_of_word(A, w.word, y))


def simple_root(A, s):
    return tuple(1 if t == s else 0 for t in range(A.rank))


def is_positive(v):
    return any(x > 0 for x in v) and all(x >= 0 for x in v)


def is_negative(v):
    return any(x < 0 for x in v) and all(x <= 0 for x in v)


def descent(A, w, s):
    """True iff l(ws) < l(w), read off the sign of w . a_s."""
    return is_negative(apply(A, w, simple_root(A, s)))


def left_descents(A, w):
    y = _dual_of_word(A, w.word)
    return [s for s, ys in enumerate(y) if ys < 0]


def right_descents(A, w):
    y = _dual_of_word(A, tuple(reversed(w.word)))
    return [s for s, ys in enumerate(y) if ys < 0]


def iter_spheres(A, radius, budget=DEFAULT_BUDGET):
    """Yield ``(n, [(word, key), ...])`` for n = 0..radius.

    ``key`` is ``w^{-1} . rho``; its negative coordinates are the right
    descents of ``w``.  Spheres are produced in lexicographic word order and
    every word is the ShortLex normal form.
    """
    if radius < 0:
        raise InputError("radius must be >= 0")
    nb = _neighbours(A)
    n_gen = A.rank
    sphere = [((), tuple([1] * n_gen))]
    total = 1
    yield 0, sphere
    for n in range(1, radius + 1):
        seen = set()
        nxt = []
        for word, z in sphere:
            for s in range(n_gen):
                if z[s] <= 0:
                    continue
                z2 = tuple(_act_dual(nb, s, z))
                if z2 in seen:
                    continue
                seen.add(z2)
                nxt.append((word + (s,), z2))
        total += len(nxt)
        if total > budget:
            raise ResourceBudgetExceeded(
                f"ball enumeration exceeded {budget} elements at length {n}"
            )
        sphere = nxt
        yield n, sphere
        if not sphere:
            for m in range(n + 1, radius + 1):
                yield m, []
            return


def ball(A, radius, budget=DEFAULT_BUDGET):
    """Elements of length at most ``radius`` grouped by length.

    Returns a list of ``(n, [WeylElement, ...])`` pairs; within each length
    the elements are in lexicographic order of their normal forms.
    """
    return [
        (n, [WeylElement(word) for word, _ in sphere])
        for n, sphere in iter_spheres(as_gcm(A), radius, budget)
    ]


def iter_sphere_sizes(A, radius, budget=DEFAULT_BUDGET):
    """Yield the number of elements of each length 0..radius.

    Same walk as :func:`iter_spheres` but keeps only the dual keys, which
    roughly halves memory for counting purposes.
    """
    A = as_gcm(A)
    if radius < 0:
        raise InputError("radius must be >= 0")
    nb = _neighbours(A)
    gens = range(A.rank)
    sphere = [tuple([1] * A.rank)]
    total = 1
    yield 1
    for n in range(1, radius + 1):
        nxt = set()
        for z in sphere:
            for s in gens:
                if z[s] > 0:
                    nxt.add(tuple(_act_dual(nb, s, z)))
        total += len(nxt)
        if total > budget:
            raise ResourceBudgetExceeded(
                f"ball enumeration exceeded {budget} elements at length {n}"
            )
        sphere = nxt
        yield len(nxt)


def sphere_sizes(A, radius, budget=DEFAULT_BUDGET):
    return list(iter_sphere_sizes(A, radius, budget))


@lru_cache(maxsize=1024)
def _principal_minors_positive(entries):
    n = len(entries)
    for k in range(1, n + 1):
        for J in combinations(range(n), k):
            sub = sympy.Matrix([[entries[i][j] for j in J] for i in J])
            if sub.det() <= 0:
                return False
    return True


def is_finite_type(A, J=None):
    """True iff the parabolic subgroup W_J is finite (all principal minors of A_J positive)."""
    A = as_gcm(A)
    J = range(A.rank) if J is None else sorted(set(J))
    if not J:
        return True
    return _principal_minors_positive(A.submatrix(J).entries)


def dual_matrix(A, w):
    """Integer matrix of w acting on V*, columns are images of the coordinate vectors."""
    n = A.rank
    cols = [_dual_of_word(A, w.word, [1 if t == j else 0 for t in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _mat_mul(X, Y):
    n = len(X)
    Yt = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in Yt] for row in X]


def _mat_pow(X, e):
    n = len(X)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            R = _mat_mul(R, X)
        X = _mat_mul(X, X)
        e >>= 1
    return R


@lru_cache(maxsize=None)
def finite_order_exponent(n):
    """Least common multiple of every possible order of a finite-order element of GL_n(Z).

    A finite-order integer matrix is diagonalisable with root-of-unity
    eigenvalues of orders d satisfying phi(d) <= n, and phi(d) >= sqrt(d/2).
    """
    orders = [d for d in range(1, 2 * n * n + 3) if sympy.totient(d) <= n]
    return math.lcm(*orders)


def has_infinite_order(A, w):
    """Exact certificate that w has infinite order."""
    X = dual_matrix(A, w)
    n = len(X)
    P = _mat_pow(X, finite_order_exponent(n))
    return any(P[i][j] != int(i == j) for i in range(n) for j in range(n))


def order_of_product(A, u, v, cutoff, certify=False):
    """Least k <= cutoff with (uv)^k = e.

    Returns ``EXCEEDS_CUTOFF`` when no such k exists.  With ``certify=True``
    an element shown to have infinite order by :func:`has_infinite_order`
    yields ``INF`` instead.
    """
    if cutoff < 1:
        raise InputError("cutoff must be >= 1")
    x = multiply(A, u, v)
    nb = _neighbours(A)
    rho = [1] * A.rank
    y = rho
    for k in range(1, cutoff + 1):
        for s in reversed(x.word):
            y = _act_dual(nb, s, y)
        if y == rho:
            return k
    if certify and has_infinite_order(A, x):
        return INF
    return EXCEEDS_CUTOFF


def longest_element(A, J=None):
    """The longest element of the finite parabolic subgroup W_J."""
    A = as_gcm(A)
    J = list(range(A.rank)) if J is None else sorted(set(J))
    if not is_finite_type(A, J):
        raise InputError(f"parabolic subgroup on {J} is infinite")
    nb = _neighbours(A)
    z = [1] * A.rank
    word = []
    grew = True
    while grew:
        grew = False
        for s in J:
            if z[s] > 0:
                z = _act_dual(nb, s, z)
                word.append(s)
                grew = True
                break
    return element(A, word)
