"""Centralizers of polynomial vector fields, from the top and from the bottom.

TOP: F = [x2, x1] + 1/3 [x1^3, x2^3] has top part the power field F_2.
Finite centralizers up to degree 5 are found by grading on the top term.

BOTTOM: F = identity + 1/2 [x1^2, x2^2].  ad(F_0) acts as multiplication by
the level, so each linear field extends formally to any order.

    python3 demos/vector_field_centralizers.py
"""

from specseq.algebra import VariableTable
from specseq.drivers.vf import VfMode, VfProblem, vf_centralizers
from specseq.vectorfield import PolyVectorField, grade_decompose, lie_bracket

t = VariableTable(["x1", "x2"])

F = PolyVectorField.parse(["x2 + 1/3*x1^3", "x1 + 1/3*x2^3"], t)
top = vf_centralizers(VfProblem(F, mode=VfMode.TOP, degree=5))
print(f"TOP  F = {F}")
for G in top.centralizers:
    print(f"  centralizer {G}  [F, G] = 0: {lie_bracket(F, G).is_zero()}")
print("  page dims at the top level:", top.page_dims.get(2 * top.level_of_top))

F = PolyVectorField.parse(["x1 + 1/2*x1^2", "x2 + 1/2*x2^2"], t)
order = 6
bottom = vf_centralizers(VfProblem(F, mode=VfMode.BOTTOM, order=order))
print()
print(f"BOTTOM  F = {F}, order {order}")
for G0, G, E in zip(bottom.kernel_L0, bottom.centralizers, bottom.residuals):
    parts = grade_decompose(G)
    tail = "exact centralizer" if E.is_zero() else f"bracket residual starts at level {min(grade_decompose(E))}"
    print(f"  G_0 = {G0}: levels {sorted(parts)}, {tail}")
    if 2 in parts:
        print(f"    G_2 = {parts[2]}")
