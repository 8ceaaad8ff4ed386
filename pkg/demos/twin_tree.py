"""The twin tree of SL2 over F2[t, 1/t].

Chambers of the positive tree are cosets g B+, those of the negative tree are
h B-.  This script factors a random matrix through its Bruhat cell, reads off
codistances and counts chambers around a panel.
"""

import random

from kmlat import laurent as ls
from kmlat.fields import field

F = field(2)
rng = random.Random(1)

M = ls.random_element(F, 2, rng)
print("M =", M)
fac = ls.bruhat_decompose(M, "+")
print("Bruhat cell of M:", fac.w.word)
print("u =", fac.u)
print("recomposes:", fac.recompose() == M)

g, h = ls.random_element(F, 2, rng), ls.random_element(F, 2, rng)
print("codistance(gB+, hB-):", ls.codistance(g, h).word)
print("codistance(hB-, gB+):", ls.codistance_negative(h, g).word)

print("chambers through each panel of gB+:", [ls.thickness_at_panel(g, s) for s in range(2)])

for length in range(4):
    w = ls.weyl_of_affine(ls.affine_of_word(2, tuple(i % 2 for i in range(length))))
    print(f"fixator of B+ and w B- for w = {w.word}: {ls.fixator_order(F, 2, w)} elements")
