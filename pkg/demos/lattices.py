"""When is a Kac-Moody group over F_q a lattice of its twin building?

The answer depends on how fast the Weyl group grows compared to q.  For the
right-angled pentagon group the growth rate is (3 + sqrt 5) / 2, so the
verdict flips between q = 2 and q = 3.
"""

from kmlat import growth as gr
from kmlat.datum import affine_a_gcm
from kmlat.descent import fuchsian_gcm

print("infinite dihedral, q = 2:", gr.lattice_check(affine_a_gcm(2), 2).verdict)

series = gr.growth_coeffs(fuchsian_gcm(5), 12)
print("pentagon growth:", series.coeffs)
print("fitted series:", gr.fit_rational(series.coeffs))
for q in (2, 3, 4, 5):
    rep = gr.lattice_report(series, q, 5)
    lo, hi = rep.growth_rate_bounds
    print(f"q = {q}: {rep.verdict:12s} ratio window [{float(lo):.4f}, {float(hi):.4f}]"
          f"  partial sum {float(rep.partial_sum):.4f}")
