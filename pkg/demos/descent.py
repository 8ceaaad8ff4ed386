"""Quasi-split descent: the unitary group SU3 and a Fuchsian example.

Folding the affine A2 diagram by the swap of types 1 and 2 leaves one fixed
type and one A2 orbit.  The relative building is a tree whose valencies
alternate between q + 1 and q^3 + 1.
"""

from kmlat import descent as ds

A, perm = ds.a2_tilde_swap()
for q in (2, 3):
    rep = ds.descent_report(ds.make_form(A, perm, q=q))
    print(f"q = {q}: orbits {rep.orbit_list}")
    print("  relative Coxeter entries:", rep.relative_coxeter)
    print("  certified infinite:", rep.relative.certified_infinite)
    print("  valencies along the tree:", rep.valency_sequence)

chk = ds.su3_involution_check(2)
print("fixed points of the involution over F4:", chk.fixed_a2, chk.fixed_a1)

# The right-angled pentagon folded by a reflection.
r = 5
rep = ds.descent_report(ds.make_form(ds.fuchsian_gcm(r), ds.fuchsian_reflection(r), q=3))
print("pentagon orbits:", rep.orbit_list)
print("pentagon valencies:", rep.valency_sequence)
