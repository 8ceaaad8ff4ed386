"""Acceptance criteria, one test each.

Every test prints a line ``CRITERION <n> PASS|FAIL <name> (<seconds>s, limit <limit>s)``
and the lines are collected again at the end of the run.  All comparisons are
exact (integers, rationals or sets); the only tolerance is the wall-clock
limit stated per criterion.
"""

import json
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product
from pathlib import Path

from kmlat import coxeter as cx
from kmlat import datum as dt
from kmlat import descent as ds
from kmlat import growth as gr
from kmlat import laurent as ls
from kmlat import roots as rt
from kmlat.fields import field

from conftest import record_acceptance
from oracles import brute_force_center_order, brute_force_sphere_sizes, gcd_pattern_sl2

POLYGONS = json.loads((Path(__file__).parent / "fixtures" / "polygon_growth.json").read_text())
PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9)


@contextmanager
def criterion(number, name, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        passed = ok and elapsed < limit
        record_acceptance(
            f"CRITERION {number} {'PASS' if passed else 'FAIL'} {name} ({elapsed:.2f}s, limit {limit}s)"
        )
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s (limit {limit}s)"


def test_criterion_01_gcm_to_coxeter():
    with criterion(1, "GCM to Coxeter table on 2x2 matrices", 1):
        table = {0: 2, 1: 3, 2: 4, 3: 6}
        checked = 0
        for a in range(-4, 1):
            for b in range(-4, 1):
                if (a == 0) != (b == 0):
                    continue
                M = cx.coxeter_of_gcm(cx.validate_gcm([[2, a], [b, 2]]))
                want = table.get(a * b, math.inf)
                assert M[0, 1] == M[1, 0] == want, (a, b)
                checked += 1
        assert checked == 17


def test_criterion_02_growth_series():
    with criterion(2, "growth series of Dinf, A2 and affine A2", 10):
        assert gr.growth_coeffs(dt.affine_a_gcm(2), 50).coeffs == (1,) + (2,) * 50
        assert sum(gr.growth_coeffs(cx.validate_gcm([[2, -1], [-1, 2]]), 10).coeffs) == 6
        A = dt.affine_a_gcm(3)
        for N in range(13):
            assert list(gr.growth_coeffs(A, N).coeffs) == brute_force_sphere_sizes(A.as_lists(), N)


def test_criterion_03_lattice_criterion():
    with criterion(3, "lattice verdicts and polygon thresholds", 60):
        assert gr.lattice_check(dt.affine_a_gcm(2), 2).verdict == "lattice"
        finite = [
            [[2, -1], [-1, 2]],
            [[2, -1], [-2, 2]],
            [[2, -1], [-3, 2]],
            [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
            [[2, -1, 0], [-1, 2, -2], [0, -1, 2]],
        ]
        for rows in finite:
            A = cx.validate_gcm(rows)
            for q in PRIME_POWERS:
                assert gr.lattice_check(A, q).verdict == "lattice", (rows, q)
        for r, depth in ((5, 12), (6, 10)):
            series = gr.growth_coeffs(ds.fuchsian_gcm(r), depth, budget=2_000_000)
            assert list(series.coeffs) == POLYGONS[str(r)]["coefficients"][: depth + 1]
            verdicts = [gr.lattice_report(series, q, r).verdict for q in PRIME_POWERS]
            first = verdicts.index("lattice")
            assert all(v == "lattice" for v in verdicts[first:]), verdicts
            assert all(v == "not-lattice" for v in verdicts[:first]), verdicts
            assert PRIME_POWERS[first] == POLYGONS[str(r)]["q_min"]


def test_criterion_04_prenilpotence_and_intervals():
    with criterion(4, "prenilpotent pairs and intervals", 60):
        A2 = cx.validate_gcm([[2, -1], [-1, 2]])
        for a in ((1, 0), (-1, 0)):
            for b in ((0, 1), (0, -1)):
                assert rt.is_prenilpotent(A2, a, b) is True
        assert {r.vector for r in rt.interval(A2, (1, 0), (0, 1)).members} == {(1, 0), (1, 1), (0, 1)}
        Dinf = dt.affine_a_gcm(2)
        assert rt.is_prenilpotent(Dinf, (1, 0), (0, 1)) is False
        assert rt.is_prenilpotent(Dinf, (1, 0), (0, -1)) is True
        assert {r.vector for r in rt.interval(Dinf, (1, 0), (0, -1)).members} == {(1, 0), (0, -1)}
        rng = random.Random(2024)
        mats = [
            [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
            [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]],
            [[2, -2, 0], [-2, 2, -1], [0, -1, 2]],
        ]
        sampled = resolved = 0
        for i in range(100):
            A = cx.validate_gcm(mats[i % 3])
            a, b = rng.sample(rt.all_roots_up_to_height(A, 4), 2)
            sampled += 1
            if rt.is_prenilpotent(A, a, b) is True:
                resolved += 1
                lin = {r.vector for r in rt.linear_interval(A, a, b)}
                assert lin <= {r.vector for r in rt.interval(A, a, b).members}
        assert sampled == 100 and resolved > 0


def test_criterion_05_phi_sets():
    with criterion(5, "Phi_u and Phi_m counts in affine A2", 30):
        A = dt.affine_a_gcm(3)
        rho = (1, 1, 1)
        w = cx.element(A, (0, 1, 2, 0, 1))
        phi_u, phi_m = rt.phi_sets(A, rt.BalancedPair.from_images(rho, cx.act_dual(A, w, rho)))
        assert (len(phi_m), len(phi_u)) == (0, 5)
        wall = rt.BalancedPair.from_images(
            (0, Fraction(1, 2), Fraction(5, 2)), (0, Fraction(-19, 2), Fraction(25, 2))
        )
        phi_u, phi_m = rt.phi_sets(A, wall)
        assert (len(phi_m), len(phi_u)) == (2, 8)
        count = 0
        for _, sphere in cx.ball(A, 6):
            for w in sphere:
                phi_u, phi_m = rt.phi_sets(A, rt.BalancedPair.from_images(rho, cx.act_dual(A, w, rho)))
                assert not phi_m and len(phi_u) == w.length
                count += 1
        assert count == sum(cx.sphere_sizes(A, 6))


def test_criterion_06_twin_tree():
    with criterion(6, "SL2 over F2[t,1/t]: Bruhat, cells, thickness, codistance, fixators", 60):
        F = field(2)
        A = dt.affine_a_gcm(2)
        rng = random.Random(6)
        for _ in range(500):
            M = ls.random_element(F, 2, rng)
            fac = ls.bruhat_decompose(M)
            assert fac.recompose() == M and ls.in_borel(fac.b, "+")
        rep = ls.verify_refined_bruhat(2, 3)
        assert rep.ok and all(size == 2 ** len(w) for w, size in rep.cell_sizes.items())
        chambers = 0
        for _, sphere in cx.ball(A, 3):
            for w in sphere:
                w_hat = ls.canonical_lift(F, 2, w)
                for u in ls.unipotent_cell(F, 2, w):
                    g = u @ w_hat
                    chambers += 1
                    assert ls.thickness_at_panel(g, 0, 2) == ls.thickness_at_panel(g, 1, 2) == 3
        assert chambers == 1 + 2 * (2 + 4 + 8)
        for _ in range(200):
            g, h = ls.random_element(F, 2, rng), ls.random_element(F, 2, rng)
            assert ls.codistance_negative(h, g) == cx.inverse(A, ls.codistance(g, h))
        for _, sphere in cx.ball(A, 3):
            for w in sphere:
                assert ls.fixator_order(F, 2, w) == (2 - 1) * 2**w.length


def test_criterion_07_borel_intersection():
    with criterion(7, "opposite Borel subgroups of SL3 meet in the torus", 30):
        for q in (2, 3):
            F = field(q)
            I = ls.identity(F, 3)
            found = ls.stabilizer_intersection(I, I)
            assert len(found) == (q - 1) ** 2
            torus = [ls.gen_torus(F, 3, p) for p in product(F.nonzero(), repeat=2)]
            members = {D for D in torus if ls.in_borel(D, "+") and ls.in_borel(D, "-")}
            assert set(found) == members and len(members) == (q - 1) ** 2


def test_criterion_08_su3_descent():
    with criterion(8, "SU3 descent: relative Dinf, valencies, fixed points", 30):
        A, perm = ds.a2_tilde_swap()
        for q in (2, 3):
            rep = ds.descent_report(ds.make_form(A, perm, q=q))
            assert rep.relative_coxeter[0][1] is cx.EXCEEDS_CUTOFF
            assert rep.relative.certified_infinite[0][1]
            assert rep.geometric_dim == 1
            assert rep.valency_sequence[:4] == (1 + q, 1 + q**3, 1 + q, 1 + q**3)
        chk = ds.su3_involution_check(2)
        assert chk.fixed_a2 == (8, 64)
        assert chk.fixed_a1[0] == 2
        assert chk.ok


def test_criterion_09_fuchsian_descent():
    with criterion(9, "Fuchsian descent and split thickness", 10):
        for q in (2, 3, 4):
            rep = ds.descent_report(ds.make_form(ds.fuchsian_gcm(5), ds.fuchsian_reflection(5), q=q))
            assert sorted(set(rep.valency_sequence)) == [1 + q, 1 + q**2]
        inputs = [
            dt.affine_a_gcm(2),
            dt.affine_a_gcm(3),
            ds.fuchsian_gcm(5),
            ds.fuchsian_gcm(6),
            cx.validate_gcm([[2, -2, 0], [-2, 2, -1], [0, -1, 2]]),
        ]
        for A in inputs:
            for q in (2, 3, 5):
                rep = ds.descent_report(ds.make_form(A, tuple(range(A.rank)), q=q))
                assert rep.split and rep.panel_thickness
                assert set(rep.panel_thickness.values()) == {q + 1}
                assert len(rep.panel_thickness) == A.rank


def test_criterion_10_center_orders():
    with criterion(10, "center orders against Hom enumeration", 10):
        qs = (2, 3, 4, 5, 7, 9)
        sl2, sl3 = dt.sl_n_datum(2), dt.sl_n_datum(3)
        pattern = [dt.center_order(sl2, q) for q in qs]
        assert pattern == [brute_force_center_order([list(c) for c in sl2.c], q) for q in qs]
        # the center of SL2 is {1, -1}, so its order is gcd(2, q - 1)
        assert pattern == [gcd_pattern_sl2(q) for q in qs] == [1, 2, 1, 2, 2, 2]
        sl3_pattern = [dt.center_order(sl3, q) for q in qs]
        assert sl3_pattern == [brute_force_center_order([list(c) for c in sl3.c], q) for q in qs]
        assert sl3_pattern == [math.gcd(3, q - 1) for q in qs]
