"""Growth series of Weyl groups and the lattice criterion for Kac-Moody groups over F_q.

The group is a lattice of its twin building when ``sum d_n / q^n`` converges,
where ``d_n`` counts Weyl group elements of length ``n``.  Everything here is
exact: coefficients are integers, sums are :class:`fractions.Fraction`, and
growth-rate brackets are rationals read off observed ratios.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from . import coxeter as cx
from .errors import InputError, ResourceBudgetExceeded

UNAVAILABLE = "unavailable"

DEFAULT_DEPTH = 40
DEFAULT_DEGREE_BOUND = 12
ROOT_TEST_DENOMINATOR = 1000


def matrix_hash(A):
    payload = json.dumps({"labels": list(A.labels), "matrix": A.as_lists()}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class GrowthSeries:
    coeffs: tuple
    source: dict = field(compare=False, default_factory=dict)

    @property
    def depth(self):
        return len(self.coeffs) - 1

    @property
    def exhausted(self):
        """True when the enumeration reached the whole (finite) group."""
        return bool(self.coeffs) and self.coeffs[-1] == 0


def growth_coeffs(A, N, budget=cx.DEFAULT_BUDGET, allow_truncation=False):
    """Element counts d_0..d_N by length.

    With ``allow_truncation`` the enumeration stops at the last complete
    length when the element budget runs out instead of raising.
    """
    A = cx.as_gcm(A)
    if N < 0:
        raise InputError("N must be >= 0")
    coeffs = []
    truncated = False
    try:
        for size in cx.iter_sphere_sizes(A, N, budget):
            coeffs.append(size)
    except ResourceBudgetExceeded:
        if not allow_truncation:
            raise
        truncated = True
    source = {
        "radius": len(coeffs) - 1,
        "requested": N,
        "matrix_hash": matrix_hash(A),
        "truncated": truncated,
    }
    return GrowthSeries(tuple(coeffs), source)


# ------------------------------------------------------------ rational fits


@dataclass(frozen=True)
class RationalSeries:
    """P(t)/Q(t) with coefficient lists in increasing degree and Q(0) = 1."""

    numerator: tuple
    denominator: tuple

    def coefficients(self, count):
        out = []
        P, Q = self.numerator, self.denominator
        for n in range(count):
            v = P[n] if n < len(P) else Fraction(0)
            v -= sum(Q[k] * out[n - k] for k in range(1, min(n, len(Q) - 1) + 1))
            out.append(v)
        return out

    def __str__(self):
        t = sympy.Symbol("t")
        num = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(self.numerator))
        den = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(self.denominator))
        return f"({sympy.sstr(sympy.expand(num))})/({sympy.sstr(sympy.expand(den))})"


def berlekamp_massey(seq):
    """Shortest linear recurrence of a sequence over Q.

    Returns ``(C, L)`` where ``C = [1, c_1, ..., c_L]`` satisfies
    ``sum_k C[k] s[n-k] = 0`` for every ``n >= L``.
    """
    s = [Fraction(x) for x in seq]
    C, B = [Fraction(1)], [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n] + sum(C[i] * s[n - i] for i in range(1, L + 1))
        if d == 0:
            m += 1
            continue
        coef = d / b
        T = list(C)
        C = C + [Fraction(0)] * max(0, len(B) + m - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    C = C[: L + 1] + [Fraction(0)] * max(0, L + 1 - len(C))
    return C, L


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _reduce(P, Q):
    t = sympy.Symbol("t")
    p = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(P)], t, domain="QQ")
    qq = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(Q)], t, domain="QQ")
    g = sympy.gcd(p, qq)
    p, qq = sympy.div(p, g)[0], sympy.div(qq, g)[0]
    lead = qq.eval(0)
    p, qq = p * (1 / lead), qq * (1 / lead)
    as_fracs = lambda poly: tuple(
        Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())
    )
    return _trim(as_fracs(p)), _trim(as_fracs(qq))


def fit_rational(coeffs, degree_bound=DEFAULT_DEGREE_BOUND, holdout=None):
    """Fit P/Q to a coefficient list, validating on held-out terms."""
    coeffs = list(coeffs)
    if holdout is None:
        holdout = min(10, len(coeffs) // 4)
    fit = coeffs[: len(coeffs) - holdout]
    C, L = berlekamp_massey(fit)
    if L > degree_bound or 2 * L > len(fit):
        return UNAVAILABLE
    P = [sum(C[k] * fit[n - k] for k in range(0, min(n, L) + 1)) for n in range(L)]
    P, Q = _reduce(P or [Fraction(0)], C)
    series = RationalSeries(P, Q)
    if series.coefficients(len(coeffs)) != [Fraction(x) for x in coeffs]:
        return UNAVAILABLE
    return series


def rational_series(A, N=DEFAULT_DEPTH, degree_bound=DEFAULT_DEGREE_BOUND, budget=cx.DEFAULT_BUDGET):
    series = growth_coeffs(A, N, budget)
    coeffs = list(series.coeffs)
    if series.exhausted:
        return RationalSeries(_trim(Fraction(c) for c in coeffs), (Fraction(1),))
    return fit_rational(coeffs, degree_bound)


# ------------------------------------------------------------ lattice verdict


@dataclass(frozen=True)
class LatticeReport:
    q: int
    verdict: str
    partial_sum: Fraction
    growth_rate_bounds: tuple
    covolume_bound: Fraction
    depth: int
    root_test_bounds: tuple
    finite: bool
    truncated: bool
    coeffs: tuple


def partial_sum(coeffs, q):
    return sum((Fraction(d, q**n) for n, d in enumerate(coeffs)), Fraction(0))


def ratio_bounds(coeffs):
    """(min, max) of d_{n+1}/d_n over the last half of the computed range."""
    n_max = len(coeffs) - 1
    start = max(1, n_max // 2)
    ratios = [Fraction(coeffs[n + 1], coeffs[n]) for n in range(start, n_max) if coeffs[n]]
    if not ratios:
        raise InputError("not enough coefficients for growth-rate bounds")
    return min(ratios), max(ratios)


def _root_bracket(d, n, den=ROOT_TEST_DENOMINATOR):
    """Integers p with (p/den)^n <= d < ((p+1)/den)^n."""
    target = d * den**n
    lo, hi = 0, den * (d + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= target:
            lo = mid
        else:
            hi = mid - 1
    return Fraction(lo, den), Fraction(lo + 1, den)


def root_test_bounds(coeffs):
    n_max = len(coeffs) - 1
    start = max(1, n_max // 2)
    brackets = [_root_bracket(coeffs[n], n) for n in range(start, n_max + 1) if coeffs[n]]
    return min(b[0] for b in brackets), max(b[1] for b in brackets)


def lattice_report(series, q, torus_rank):
    """Verdict and covolume data for a precomputed growth series."""
    coeffs = list(series.coeffs)
    ps = partial_sum(coeffs, q)
    if series.exhausted:
        bounds = (Fraction(0), Fraction(0))
        roots = (Fraction(0), Fraction(0))
        verdict = "lattice"
    else:
        if series.depth < 10:
            if series.source.get("truncated"):
                raise ResourceBudgetExceeded(
                    f"element budget ran out at length {series.depth + 1}; at least 10 lengths are needed"
                )
            raise InputError(f"need at least 10 terms of the growth series, have depth {series.depth}")
        bounds = ratio_bounds(coeffs)
        roots = root_test_bounds(coeffs)
        if bounds[1] < q:
            verdict = "lattice"
        elif bounds[0] > q:
            verdict = "not-lattice"
        else:
            verdict = "boundary-undetermined"
    return LatticeReport(
        q=q,
        verdict=verdict,
        partial_sum=ps,
        growth_rate_bounds=bounds,
        covolume_bound=ps / (q - 1) ** torus_rank,
        depth=series.depth,
        root_test_bounds=roots,
        finite=series.exhausted,
        truncated=bool(series.source.get("truncated")),
        coeffs=tuple(coeffs),
    )


def lattice_check(A, q, N=DEFAULT_DEPTH, torus_rank=None, budget=cx.DEFAULT_BUDGET):
    """Lattice verdict for the Kac-Moody group of ``A`` over F_q.

    ``torus_rank`` defaults to the rank of the simply connected datum.  If
    the element budget runs out before length ``N`` the series is cut at the
    last complete length and the report says so.
    """
    A = cx.as_gcm(A)
    if torus_rank is None:
        torus_rank = A.rank
    series = growth_coeffs(A, N, budget, allow_truncation=True)
    return lattice_report(series, q, torus_rank)
