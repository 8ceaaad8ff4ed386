"""Weyl groups from generalized Cartan matrices.

Run with ``python3 demos/weyl_groups.py``.  We build the affine A2 matrix,
look at its Coxeter matrix, multiply a few elements in ShortLex normal form
and watch the spheres of the Cayley graph grow linearly.
"""

from kmlat import coxeter as cx
from kmlat import growth as gr
from kmlat.datum import affine_a_gcm

A = affine_a_gcm(3)
print("Cartan matrix:", A.as_lists())
print("Coxeter matrix:", [list(r) for r in cx.coxeter_of_gcm(A).entries])

# Words are reduced to their ShortLex normal form on the fly.
w = cx.multiply(A, (1, 2), (2, 0))
print("s1 s2 * s2 s0 =", w.word)

# Acting on roots is one reflection per letter.
print("s1 s2 . a1 =", cx.apply(A, cx.element(A, (1, 2)), cx.simple_root(A, 1)))

sizes = cx.sphere_sizes(A, 12)
print("elements of length 0..12:", sizes)
print("growth series:", gr.rational_series(A, 30))

# A finite group exhausts itself; its series is a polynomial.
A2 = cx.validate_gcm([[2, -1], [-1, 2]])
print("A2 sphere sizes:", cx.sphere_sizes(A2, 5))
