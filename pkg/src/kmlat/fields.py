"""Finite fields GF(p^k) for k <= 4 with elements encoded as integers.

The element ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` (mod the defining
polynomial) is stored as the integer ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}``.
The defining polynomial is the lexicographically least monic irreducible one,
comparing coefficient vectors from degree k-1 down to the constant term.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import sympy

from .errors import InputError

MAX_EXTENSION_DEGREE = 4
_TABLE_LIMIT = 1 << 16


def factor_prime_power(q):
    """Return ``(p, k)`` with ``q == p**k``, or raise :class:`InputError`."""
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise InputError(f"{q!r} is not a prime power")
    f = sympy.factorint(q)
    if len(f) != 1:
        raise InputError(f"{q} is not a prime power")
    (p, k), = f.items()
    return int(p), int(k)


def is_prime_power(q):
    try:
        factor_prime_power(q)
    except InputError:
        return False
    return True


def conway_style_modulus(p, k):
    """Coefficients (low to high, monic) of the chosen irreducible of degree k."""
    if k == 1:
        return (0, 1)
    x = sympy.Symbol("x")
    for high_first in product(range(p), repeat=k):
        coeffs = tuple(reversed(high_first)) + (1,)
        if coeffs[0] == 0:
            continue
        poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
        if poly.is_irreducible:
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """The field with ``p**k`` elements."""

    def __init__(self, p, k=1):
        if not sympy.isprime(p):
            raise InputError(f"{p} is not prime")
        if not 1 <= k <= MAX_EXTENSION_DEGREE:
            raise InputError(f"extension degree must be between 1 and {MAX_EXTENSION_DEGREE}")
        self.p, self.k = p, k
        self.q = p**k
        self.modulus = conway_style_modulus(p, k)
        self._log = self._exp = None
        if k > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    @classmethod
    def of_order(cls, q):
        return field(*factor_prime_power(q))

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __reduce__(self):
        return (field, (self.p, self.k))

    # -- digit helpers
    def _digits(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _from_digits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d % self.p
        return a

    def _poly_mul(self, a, b):
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        mod = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k + 1):
                    prod[d - k + i] -= c * mod[i]
        return self._from_digits(prod[:k])

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            exp = [1] * (q - 1)
            x = 1
            ok = True
            for i in range(1, q - 1):
                x = self._poly_mul(x, g)
                if x == 1:
                    ok = False
                    break
                exp[i] = x
            if ok:
                break
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp, self._log = exp, log
        self.primitive = g

    # -- arithmetic
    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._from_digits([x + y for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a):
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self._from_digits([-x for x in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        e %= self.q - 1
        if self.k == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return self._exp[self._log[a] * e % (self.q - 1)]
        r = 1
        while e:
            if e & 1:
                r = self._poly_mul(r, a)
            a = self._poly_mul(a, a)
            e >>= 1
        return r

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in a field")
        return self.pow(a, -1)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frobenius(self, a, power=1):
        """``a ** (p ** power)``."""
        return self.pow(a, self.p**power)

    def from_int(self, n):
        """Image of an ordinary integer (so -1 maps to p - 1)."""
        return n % self.p

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)

    def subfield_elements(self, order):
        """Elements of the subfield with ``order`` elements."""
        return [a for a in self.elements() if self.pow(a, order) == a]

    def check(self, a):
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise InputError(f"{a!r} is not an element of {self!r}")
        return a


@lru_cache(maxsize=None)
def field(p, k=1):
    return GF(p, k)
