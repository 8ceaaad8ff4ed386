"""Real roots, chamber sides, prenilpotent pairs, intervals and balanced point pairs.

A chamber of the Coxeter complex is identified with a Weyl group element
``w``.  The chamber ``w`` lies in the half-apartment of a root ``alpha``
exactly when ``w^{-1} alpha`` is positive, which is the same as
``alpha(w . rho) > 0`` for the interior point ``rho`` of the fundamental
chamber.  Searches over chambers therefore only need the points ``w . rho``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import coxeter as cx
from .errors import (
    DegenerateSegment,
    InputError,
    NonEmptyLeviPart,
    NotPrenilpotent,
    ResourceBudgetExceeded,
    WallIncidence,
)

UNRESOLVED = "unresolved"

DEFAULT_HEIGHT_CAP = 64
DEFAULT_RADIUS = 12


@dataclass(frozen=True, order=True)
class Root:
    """A real root together with its reflection in normal form."""

    vector: tuple
    reflection: cx.WeylElement = field(compare=False)

    @property
    def height(self):
        return sum(self.vector)

    @property
    def positive(self):
        return cx.is_positive(self.vector)

    def __neg__(self):
        return Root(tuple(-x for x in self.vector), self.reflection)


def height(v):
    return sum(v)


def _reduce_to_simple(A, v):
    """Return ``(word, s, sign)`` with ``v = sign * word . a_s``.

    Repeatedly applies a simple reflection lowering the height; raises
    :class:`InputError` if ``v`` is not a real root.
    """
    v = list(v)
    if len(v) != A.rank:
        raise InputError(f"root vector of length {len(v)} for rank {A.rank}")
    if cx.is_positive(v):
        sign = 1
    elif cx.is_negative(v):
        sign = -1
        v = [-x for x in v]
    else:
        raise InputError(f"{tuple(v)} has mixed signs and is not a root")
    word = []
    while True:
        if sum(v) == 1:
            s = v.index(1)
            return tuple(reversed(word)), s, sign
        for s in range(A.rank):
            pairing = sum(A[s, t] * v[t] for t in range(A.rank))
            if pairing > 0:
                break
        else:
            raise InputError("vector is not a real root (no height-lowering reflection)")
        v[s] -= pairing
        if not cx.is_positive(v):
            raise InputError("vector is not a real root")
        word.append(s)


def make_root(A, vector):
    """Certify ``vector`` as a real root and attach its reflection."""
    A = cx.as_gcm(A)
    word, s, _ = _reduce_to_simple(A, vector)
    refl = cx.element(A, word + (s,) + tuple(reversed(word)))
    return Root(tuple(vector), refl)


def simple_roots(A):
    return [Root(cx.simple_root(A, s), cx.WeylElement((s,))) for s in range(A.rank)]


def is_real_root(A, vector):
    try:
        _reduce_to_simple(cx.as_gcm(A), vector)
    except InputError:
        return False
    return True


@lru_cache(maxsize=64)
def _positive_roots_cached(A, h, budget):
    found = {r.vector: r for r in simple_roots(A)}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for r in frontier:
            for s in range(A.rank):
                v = tuple(cx._act_root(A, s, r.vector))
                if v in found or not cx.is_positive(v) or sum(v) > h:
                    continue
                refl = cx.element(A, (s,) + r.reflection.word + (s,))
                root = Root(v, refl)
                found[v] = root
                nxt.append(root)
                if len(found) > budget:
                    raise ResourceBudgetExceeded(f"more than {budget} roots of height <= {h}")
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda r: (r.height, tuple(-x for x in r.vector))))


def roots_up_to_height(A, h, budget=cx.DEFAULT_BUDGET):
    """All positive real roots of height at most ``h``, sorted by height."""
    if h < 1:
        raise InputError("height must be >= 1")
    return list(_positive_roots_cached(cx.as_gcm(A), h, budget))


def all_roots_up_to_height(A, h, budget=cx.DEFAULT_BUDGET):
    pos = roots_up_to_height(A, h, budget)
    return pos + [-r for r in pos]


def pairing(alpha, y):
    """Value of the root vector ``alpha`` at the point ``y`` of V*."""
    return sum(a * b for a, b in zip(alpha, y))


def chamber_side(A, w, alpha):
    """+1 if the chamber ``w`` lies in ``alpha``, -1 otherwise."""
    A = cx.as_gcm(A)
    vec = alpha.vector if isinstance(alpha, Root) else tuple(alpha)
    v = cx.apply(A, cx.inverse(A, w), vec)
    if cx.is_positive(v):
        return 1
    if cx.is_negative(v):
        return -1
    raise WallIncidence(f"chamber {w.word} lies on the wall of {vec}")


# ----------------------------------------------------------------- chamber search


def _vec(r):
    return r.vector if isinstance(r, Root) else tuple(r)


@lru_cache(maxsize=32)
def _chamber_points(A, radius):
    """``(points, chambers)``: ``w . rho`` for every w of length <= radius."""
    points, chambers = [], []
    for _, sphere in cx.iter_spheres(A, radius):
        for word, z in sphere:
            # z = w^{-1} . rho, so z is the point of the chamber w^{-1}.
            points.append(z)
            chambers.append(tuple(reversed(word)))
    return tuple(points), tuple(chambers)


def _dihedral_points(A, ra, rb, radius):
    """Chamber points of alternating products of the two reflections."""
    out = []
    for start in (ra, rb):
        other = rb if start is ra else ra
        word = ()
        for k in range(1, 2 * radius + 1):
            word = word + (start if k % 2 else other).word
            out.append((tuple(cx._dual_of_word(A, word)), word))
    return out


def _search(A, alpha, beta, radius):
    """Map each occupied quadrant (sign_alpha, sign_beta) to a chamber word."""
    a, b = _vec(alpha), _vec(beta)
    found = {}
    points, chambers = _chamber_points(A, radius)
    extra = []
    if isinstance(alpha, Root) and isinstance(beta, Root):
        extra = _dihedral_points(A, alpha.reflection, beta.reflection, radius)
    candidates = list(zip(points, chambers)) + extra
    for y, word in candidates:
        pa, pb = pairing(a, y), pairing(b, y)
        key = (1 if pa > 0 else -1, 1 if pb > 0 else -1)
        if key not in found:
            found[key] = word
            if len(found) == 4:
                break
    return found


def walls_cross(A, alpha, beta):
    """True iff the reflections of the two roots generate a finite group."""
    A = cx.as_gcm(A)
    x = cx.multiply(A, _as_root(A, alpha).reflection, _as_root(A, beta).reflection)
    return not cx.has_infinite_order(A, x)


def _as_root(A, r):
    return r if isinstance(r, Root) else make_root(A, r)


def is_prenilpotent(A, alpha, beta, radius=DEFAULT_RADIUS):
    """Decide whether both alpha & beta and (-alpha) & (-beta) contain chambers.

    Returns ``True``, ``False`` or :data:`UNRESOLVED`.
    """
    A = cx.as_gcm(A)
    alpha, beta = _as_root(A, alpha), _as_root(A, beta)
    a, b = alpha.vector, beta.vector
    if b == tuple(-x for x in a):
        return False
    if a == b:
        return True
    if walls_cross(A, alpha, beta):
        return True
    found = _search(A, alpha, beta, radius)
    if (1, 1) in found and (-1, -1) in found:
        return True
    # Two disjoint walls cut the cone into three regions, so exactly one of
    # the four quadrants is empty; seeing three of them settles the question.
    if len(found) == 3:
        return False
    return UNRESOLVED


@dataclass(frozen=True)
class IntervalResult:
    members: tuple
    certified: bool
    search_radius: int


def _inversion_roots(A, word):
    """Positive roots made negative by the inverse of the reduced word."""
    out = []
    prefix = ()
    for s in word:
        out.append(cx.apply(A, cx.WeylElement(prefix), cx.simple_root(A, s)))
        prefix = prefix + (s,)
    return out


def _separating_roots(A, c1, c2):
    """Roots containing chamber c1 but not chamber c2 (finite list)."""
    x = cx.element(A, tuple(reversed(c1)) + tuple(c2))
    c1e = cx.element(A, c1)
    return [cx.apply(A, c1e, r) for r in _inversion_roots(A, x.word)]


def _cone_coefficients(a, b, g):
    """Exact (lam, mu) with g = lam*a + mu*b, or None when g is off the plane."""
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            det = a[i] * b[j] - a[j] * b[i]
            if det:
                lam = Fraction(g[i] * b[j] - g[j] * b[i], det)
                mu = Fraction(a[i] * g[j] - a[j] * g[i], det)
                if all(lam * a[k] + mu * b[k] == g[k] for k in range(n)):
                    return lam, mu
                return None
    # proportional a, b: g must be a nonnegative multiple of a
    k = next(i for i in range(n) if a[i])
    lam = Fraction(g[k], a[k])
    if all(lam * a[i] == g[i] for i in range(n)):
        return lam, Fraction(0)
    return None


def _in_cone(a, b, g):
    c = _cone_coefficients(a, b, g)
    if c is not None and c[0] >= 0 and c[1] >= 0:
        return True
    # when a and b are proportional the cone may also be the ray through b
    c = _cone_coefficients(b, a, g)
    return c is not None and c[0] >= 0 and c[1] >= 0


def _abs_height(v):
    return abs(sum(v))


def interval(A, alpha, beta, height_cap=DEFAULT_HEIGHT_CAP, radius=DEFAULT_RADIUS):
    """The combinatorial interval of a prenilpotent pair.

    Every member separates a chamber of alpha & beta from a chamber of
    (-alpha) & (-beta), so candidates come from one finite separating set.
    When the walls cross, membership is exactly the cone test (the walls of
    all members pass through the codimension-two face where the two walls
    meet), and the result is certified.  Otherwise membership is checked
    against every chamber found within ``radius``.
    """
    A = cx.as_gcm(A)
    alpha, beta = _as_root(A, alpha), _as_root(A, beta)
    verdict = is_prenilpotent(A, alpha, beta, radius)
    if verdict is not True:
        raise NotPrenilpotent(f"pair {alpha.vector}, {beta.vector} is {verdict!r}")
    if alpha.vector == beta.vector:
        return IntervalResult((alpha,), True, radius)
    a, b = alpha.vector, beta.vector
    found = _search(A, alpha, beta, radius)
    crossing = walls_cross(A, alpha, beta)
    if (1, 1) not in found or (-1, -1) not in found:
        # Only possible in the crossing case with witnesses beyond the radius.
        members = linear_interval(A, alpha, beta, height_cap)
        return IntervalResult(tuple(members), False, radius)
    cands = _separating_roots(A, found[(1, 1)], found[(-1, -1)])
    cands = [g for g in cands if _abs_height(g) <= height_cap]
    if crossing:
        keep = [g for g in cands if _in_cone(a, b, g)]
        certified = True
    else:
        points, _ = _chamber_points(A, radius)
        keep = []
        for g in cands:
            ok = True
            for y in points:
                pa, pb, pg = pairing(a, y), pairing(b, y), pairing(g, y)
                if (pa > 0 and pb > 0 and pg < 0) or (pa < 0 and pb < 0 and pg > 0):
                    ok = False
                    break
            if ok:
                keep.append(g)
        certified = cx.is_finite_type(A) and radius >= cx.longest_element(A).length
    members = sorted({tuple(g) for g in keep} | {a, b})
    return IntervalResult(tuple(make_root(A, g) for g in members), certified, radius)


def linear_interval(A, alpha, beta, height_cap=DEFAULT_HEIGHT_CAP):
    """Roots of height at most ``height_cap`` in the closed cone spanned by alpha and beta."""
    A = cx.as_gcm(A)
    a, b = _vec(alpha), _vec(beta)
    out = []
    for r in all_roots_up_to_height(A, height_cap):
        if _in_cone(a, b, r.vector):
            out.append(r)
    for r in (alpha, beta):
        r = _as_root(A, r)
        if _abs_height(r.vector) > height_cap and r not in out:
            out.append(r)
    return sorted(set(out))


# -------------------------------------------------------------- balanced pairs


@dataclass(frozen=True)
class ApartmentPoint:
    """A point of the twin apartment.

    ``coords`` are the values ``a_s(x)`` as exact rationals.  A point of sign
    ``-`` lives in the negative cone; its opposite (negated coordinates) is
    the image used in the positive half.
    """

    coords: tuple
    sign: str = "+"

    def __post_init__(self):
        if self.sign not in "+-" or len(self.sign) != 1:
            raise InputError("sign must be '+' or '-'")
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def positive_image(self):
        if self.sign == "+":
            return self.coords
        return tuple(-c for c in self.coords)


@dataclass(frozen=True)
class BalancedPair:
    x_plus: ApartmentPoint
    x_minus: ApartmentPoint

    def __post_init__(self):
        if self.x_plus.sign != "+" or self.x_minus.sign != "-":
            raise InputError("a balanced pair needs one point of each sign")

    @classmethod
    def from_images(cls, x_plus, x_minus_image):
        """Build the pair from two points of the positive Tits cone."""
        neg = tuple(-Fraction(c) for c in x_minus_image)
        return cls(ApartmentPoint(tuple(x_plus), "+"), ApartmentPoint(neg, "-"))


_WALK_LIMIT = 100_000


def normalize_point(A, y):
    """Write ``y = w . p`` with ``p`` in the closed fundamental chamber.

    Returns ``(word, p)`` where ``word`` is a reduced word for ``w``.
    """
    nb = cx._neighbours(A)
    v = [Fraction(c) for c in y]
    word = []
    for _ in range(_WALK_LIMIT):
        for s, vs in enumerate(v):
            if vs < 0:
                break
        else:
            return tuple(word), tuple(v)
        v = cx._act_dual(nb, s, v)
        word.append(s)
    raise DegenerateSegment(f"point {tuple(y)} is not in the Tits cone (walk did not stop)")


def facet_type(p):
    return tuple(s for s, v in enumerate(p) if v == 0)


def _parabolic_roots(A, J):
    """All roots (both signs) of the finite parabolic subsystem on J."""
    found = set()
    frontier = [cx.simple_root(A, s) for s in J]
    found.update(frontier)
    while frontier:
        nxt = []
        for v in frontier:
            for s in J:
                u = tuple(cx._act_root(A, s, v))
                if u not in found:
                    found.add(u)
                    nxt.append(u)
        frontier = nxt
    return found | {tuple(-x for x in v) for v in found}


def phi_sets(A, omega):
    """``(Phi_u, Phi_m)`` for a balanced pair of points, as sorted lists of roots.

    Both points are first moved by the same element so that ``x_plus`` sits
    in the closed fundamental chamber.  The candidate roots are then the
    inversion set of the element carrying the fundamental chamber to the
    chamber of the second point, together with the finite root systems of the
    two facet types; each candidate is tested exactly.
    """
    A = cx.as_gcm(A)
    xp = omega.x_plus.positive_image()
    xm = omega.x_minus.positive_image()
    if len(xp) != A.rank or len(xm) != A.rank:
        raise InputError("point dimension does not match the matrix")
    nb = cx._neighbours(A)
    g_word, xp0 = normalize_point(A, xp)
    ym = [Fraction(c) for c in xm]
    for s in g_word:
        ym = cx._act_dual(nb, s, ym)
    # now xp0 = g . xp with g = reversed(g_word) applied letter by letter
    K = facet_type(xp0)
    if not cx.is_finite_type(A, K):
        raise DegenerateSegment(f"positive point lies on a non-spherical facet {K}")
    w_word, p = normalize_point(A, ym)
    J = facet_type(p)
    if not cx.is_finite_type(A, J):
        raise DegenerateSegment(f"negative point lies on a non-spherical facet {J}")
    w = cx.WeylElement(w_word)
    cands = set(tuple(r) for r in _inversion_roots(A, w_word))
    cands |= {cx.apply(A, w, r) for r in _parabolic_roots(A, J)}
    cands |= _parabolic_roots(A, K)
    phi_u, phi_m = [], []
    for r in cands:
        vp, vm = pairing(r, xp0), pairing(r, ym)
        if vp == 0 and vm == 0:
            phi_m.append(r)
        elif vp >= 0 and vm <= 0:
            phi_u.append(r)
    g_inv = cx.WeylElement(tuple(g_word))  # g^{-1} = s_1 s_2 ... s_k
    back = lambda rs: sorted(make_root(A, cx.apply(A, g_inv, r)) for r in rs)
    return back(phi_u), back(phi_m)


def fixator_order_formula(A, omega, q, torus_rank):
    """Order of T ⋉ U(omega) over F_q when the Levi part is trivial."""
    phi_u, phi_m = phi_sets(A, omega)
    if phi_m:
        raise NonEmptyLeviPart(f"{len(phi_m)} roots have walls containing both points")
    return (q - 1) ** torus_rank * q ** len(phi_u)
