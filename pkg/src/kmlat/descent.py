"""Quasi-split forms from Dynkin diagram automorphisms.

A form is a generalized Cartan matrix with a diagram automorphism ``pi`` and a
pi-stable set ``s0`` of anisotropic types.  The relative Weyl group is
generated by one element per spherical orbit ``o``, namely
``w0(o ∪ s0) w0(s0)``; with ``s0`` empty that is ``s``, ``st`` or ``sts`` for
an orbit ``{s}``, an orthogonal pair or an A2 pair.  Orbits whose types do
not generate a finite group carry no relative reflection and are reported as
``non-spherical``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import sympy

from . import coxeter as cx
from . import laurent as ls
from .errors import InputError, InvarianceViolation, UnsupportedOrbit
from .fields import GF, factor_prime_power

DEFAULT_CUTOFF = 64


@dataclass(frozen=True)
class DiagramAutomorphism:
    perm: tuple
    order: int

    def __call__(self, s):
        return self.perm[s]

    def orbits(self):
        seen, out = set(), []
        for s in range(len(self.perm)):
            if s in seen:
                continue
            orb, t = [], s
            while t not in orb:
                orb.append(t)
                t = self.perm[t]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out


def validate_automorphism(A, perm):
    """Check that ``perm`` (a sequence, or a label mapping) preserves A."""
    n = A.rank
    if isinstance(perm, dict):
        pos = {lab: i for i, lab in enumerate(A.labels)}
        try:
            perm = [pos[str(perm[lab])] for lab in A.labels]
        except KeyError as exc:
            raise InputError(f"permutation does not cover label {exc}") from None
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(n)):
        raise InputError("not a permutation of the index set")
    for s in range(n):
        for t in range(n):
            if A[perm[s], perm[t]] != A[s, t]:
                raise InvarianceViolation((s, t))
    order = 1
    for orb in DiagramAutomorphism(perm, 1).orbits():
        order = math.lcm(order, len(orb))
    return DiagramAutomorphism(perm, order)


@dataclass(frozen=True)
class QuasiSplitForm:
    gcm: cx.GeneralizedCartanMatrix
    aut: DiagramAutomorphism
    s0: tuple = ()
    q: int = 2

    def __post_init__(self):
        s0 = tuple(sorted(set(self.s0)))
        object.__setattr__(self, "s0", s0)
        if any(self.aut(s) not in s0 for s in s0):
            raise InputError("s0 must be stable under the automorphism")
        factor_prime_power(self.q)


def make_form(A, perm, s0=(), q=2):
    return QuasiSplitForm(A, validate_automorphism(A, perm), tuple(s0), q)


# ------------------------------------------------------------- apartment


@dataclass(frozen=True)
class RelativeApartment:
    dim: int
    basis: tuple
    geometric_dim: int


def _constraint_rows(form):
    n = form.gcm.rank
    rows = []
    for s in form.s0:
        rows.append([int(t == s) for t in range(n)])
    for s in range(n):
        t = form.aut(s)
        if t != s:
            rows.append([int(u == s) - int(u == t) for u in range(n)])
    return rows


def relative_apartment(form):
    """Fixed subspace cut out by a_s = 0 (s in s0) and a_s = a_pi(s).

    ``dim`` is the dimension of that linear subspace of V*.  Its geometric
    dimension (as a cell complex) is the size of the largest spherical set of
    relative generators, which is 1 exactly when the relative building is a
    tree.
    """
    n = form.gcm.rank
    rows = _constraint_rows(form)
    if rows:
        vecs = sympy.Matrix(rows).nullspace()
        basis = tuple(tuple(Fraction(int(x.p), int(x.q)) for x in v) for v in vecs)
    else:
        basis = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    return RelativeApartment(len(basis), basis, _geometric_dim(form))


def _geometric_dim(form):
    gens = [o for o, kind in classify_orbits(form) if kind not in ("anisotropic", "non-spherical")]
    best = 0
    for k in range(1, len(gens) + 1):
        for T in combinations(gens, k):
            types = set(form.s0).union(*T)
            if cx.is_finite_type(form.gcm, types):
                best = k
                break
        else:
            break
    return best


# ------------------------------------------------------------- orbits


def classify_orbit(A, orbit, s0=()):
    """``A1``, ``A1xA1``, ``A2``, ``anisotropic``, ``non-spherical`` or ``unsupported``."""
    orbit = tuple(sorted(orbit))
    if set(orbit) <= set(s0):
        return "anisotropic"
    if not cx.is_finite_type(A, set(orbit) | set(s0)):
        return "non-spherical"
    if len(orbit) == 1:
        return "A1"
    if len(orbit) == 2:
        m = cx.coxeter_of_gcm(A)[orbit]
        if m == 2:
            return "A1xA1"
        if m == 3:
            return "A2"
    return "unsupported"


def classify_orbits(form):
    return [(o, classify_orbit(form.gcm, o, form.s0)) for o in form.aut.orbits()]


_THICKNESS_EXPONENT = {"A1": 1, "A1xA1": 2, "A2": 3}


def panel_thickness(orbit, A, q):
    """q + 1, q^2 + 1 or q^3 + 1 for an orbit of type A1, A1xA1 or A2."""
    kind = classify_orbit(A, orbit)
    if kind not in _THICKNESS_EXPONENT:
        raise UnsupportedOrbit(f"orbit {tuple(orbit)} of type {kind} has no thickness rule")
    return q ** _THICKNESS_EXPONENT[kind] + 1


def relative_generator(A, orbit, s0=()):
    J = set(orbit) | set(s0)
    return cx.multiply(A, cx.longest_element(A, J), cx.longest_element(A, s0))


@dataclass(frozen=True)
class RelativeWeyl:
    orbits: tuple
    labels: tuple
    generators: tuple
    entries: tuple
    certified_infinite: tuple

    def as_coxeter_matrix(self):
        """Entries beyond the cutoff become INF when certified infinite."""
        rows = []
        for i, row in enumerate(self.entries):
            out = []
            for j, m in enumerate(row):
                if m is cx.EXCEEDS_CUTOFF:
                    if not self.certified_infinite[i][j]:
                        raise InputError(f"entry {(i, j)} exceeds the cutoff without certificate")
                    m = cx.INF
                out.append(m)
            rows.append(tuple(out))
        return cx.CoxeterMatrix(self.labels, tuple(rows))


def relative_weyl(form, cutoff=DEFAULT_CUTOFF):
    A = form.gcm
    orbits, gens = [], []
    for o, kind in classify_orbits(form):
        if kind == "unsupported":
            raise UnsupportedOrbit(f"orbit {o} is spherical but of unsupported type")
        if kind in ("anisotropic", "non-spherical"):
            continue
        orbits.append(o)
        gens.append(relative_generator(A, o, form.s0))
    k = len(gens)
    entries = [[1] * k for _ in range(k)]
    certified = [[False] * k for _ in range(k)]
    for i, j in combinations(range(k), 2):
        m = cx.order_of_product(A, gens[i], gens[j], cutoff)
        entries[i][j] = entries[j][i] = m
        if m is cx.EXCEEDS_CUTOFF:
            inf = cx.has_infinite_order(A, cx.multiply(A, gens[i], gens[j]))
            certified[i][j] = certified[j][i] = inf
    labels = tuple(
        A.labels[o[0]] if len(o) == 1 else "{" + ",".join(A.labels[s] for s in o) + "}"
        for o in orbits
    )
    return RelativeWeyl(
        tuple(orbits),
        labels,
        tuple(gens),
        tuple(tuple(r) for r in entries),
        tuple(tuple(r) for r in certified),
    )


@dataclass(frozen=True)
class RelativeData:
    apartment_dim: int
    geometric_dim: int
    apartment_basis: tuple
    orbit_list: tuple
    relative: RelativeWeyl
    panel_thickness: dict = field(hash=False)
    valency_sequence: tuple = ()
    split: bool = False

    @property
    def relative_coxeter(self):
        return self.relative.entries

    @property
    def is_tree(self):
        return self.geometric_dim == 1


def descent_report(form, cutoff=DEFAULT_CUTOFF, sequence_length=6):
    A = form.gcm
    apt = relative_apartment(form)
    rel = relative_weyl(form, cutoff)
    thickness = {}
    if not form.s0:
        for o in rel.orbits:
            thickness[o] = panel_thickness(o, A, form.q)
    valencies = ()
    if apt.geometric_dim == 1 and len(rel.orbits) == 2 and thickness:
        a, b = (thickness[o] for o in rel.orbits)
        valencies = tuple(a if i % 2 == 0 else b for i in range(sequence_length))
    return RelativeData(
        apartment_dim=apt.dim,
        geometric_dim=apt.geometric_dim,
        apartment_basis=apt.basis,
        orbit_list=tuple(classify_orbits(form)),
        relative=rel,
        panel_thickness=thickness,
        valency_sequence=valencies,
        split=all(form.aut(s) == s for s in range(A.rank)) and not form.s0,
    )


# ------------------------------------------------------------- Fuchsian


def fuchsian_gcm(r):
    """Right-angled r-gon matrix: 0 between cyclic neighbours, -2 otherwise."""
    if r < 5:
        raise InputError("r must be at least 5")
    rows = [[2 if i == j else (0 if (i - j) % r in (1, r - 1) else -2) for j in range(r)] for i in range(r)]
    return cx.validate_gcm(rows)


def fuchsian_reflection(r, axis=0):
    """Reflection i -> (axis - i) mod r of the r-gon's index set."""
    return tuple((axis - i) % r for i in range(r))


def a2_tilde_swap():
    """The affine A2 matrix with the automorphism exchanging types 1 and 2."""
    from .datum import affine_a_gcm

    return affine_a_gcm(3), (0, 2, 1)


# ------------------------------------------------------------- SU3 check


def star(M, F, sigma_power):
    """The involution tau∘inverse∘sigma on SL_3 over F[t, t^-1]."""
    n = M.n
    frob = M.map_entries(lambda x: x.map_coeffs(lambda c: F.frobenius(c, sigma_power)))
    inv = frob.inverse()
    return ls.LaurentMatrix(
        F, [[inv.rows[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)], check=False
    )


@dataclass
class SU3Report:
    q: int
    field_order: int
    sign: int
    involution_on_random: bool
    random_checked: int
    generator_checks: dict
    fixed_a2: tuple
    fixed_a1: tuple
    thickness_match: bool

    @property
    def ok(self):
        return self.involution_on_random and all(self.generator_checks.values()) and self.thickness_match


def su3_involution_check(q, samples=100, seed=0):
    """Check the quasi-split involution of SL_3 over F_{q^2}[t, t^-1].

    On generators the involution acts by x1(r) -> x2(-r^σ), x2(r) -> x1(-r^σ),
    x0(r) -> x0(-r^σ) and D_{u,v} -> D_{v^σ, u^σ}.  In characteristic 2 the
    sign disappears.  Fixed points are counted in the unipotent group of the
    orbit {1, 2} (upper unitriangular matrices over F_{q^2}) and in the root
    group of the fixed type 0.
    """
    p, k = factor_prime_power(q)
    F = GF(p, 2 * k)
    sig = lambda c: F.frobenius(c, k)
    eps = F.neg(1)
    rng = random.Random(seed)
    ok_random = True
    for _ in range(samples):
        M = ls.random_element(F, 3, rng, 5)
        if star(star(M, F, k), F, k) != M:
            ok_random = False
            break
    checks = {"x1": True, "x2": True, "x0": True, "torus": True}
    for r in F.elements():
        s = F.mul(eps, sig(r))
        checks["x1"] &= star(ls.gen_x(F, 3, 1, r), F, k) == ls.gen_x(F, 3, 2, s)
        checks["x2"] &= star(ls.gen_x(F, 3, 2, r), F, k) == ls.gen_x(F, 3, 1, s)
        checks["x0"] &= star(ls.gen_x(F, 3, 0, r), F, k) == ls.gen_x(F, 3, 0, s)
    for u, v in product(F.nonzero(), repeat=2):
        checks["torus"] &= star(ls.gen_torus(F, 3, (u, v)), F, k) == ls.gen_torus(F, 3, (sig(v), sig(u)))
    fixed = total = 0
    for a, b, c in product(F.elements(), repeat=3):
        M = ls.LaurentMatrix.from_terms(
            F, 3,
            {(0, 0): {0: 1}, (1, 1): {0: 1}, (2, 2): {0: 1},
             (0, 1): {0: a}, (1, 2): {0: b}, (0, 2): {0: c}},
            check=False,
        )
        total += 1
        fixed += star(M, F, k) == M
    fixed0 = sum(star(ls.gen_x(F, 3, 0, r), F, k) == ls.gen_x(F, 3, 0, r) for r in F.elements())
    A, perm = a2_tilde_swap()
    match = (
        fixed + 1 == panel_thickness((1, 2), A, q)
        and fixed0 + 1 == panel_thickness((0,), A, q)
    )
    return SU3Report(
        q=q,
        field_order=F.q,
        sign=-1 if p != 2 else 1,
        involution_on_random=ok_random,
        random_checked=samples,
        generator_checks=checks,
        fixed_a2=(fixed, total),
        fixed_a1=(fixed0, F.q),
        thickness_match=match,
    )
