"""Extend a prescribed diagonal to a matrix commuting with an upper-triangular m.

Superdiagonal j is grade level j.  Because the diagonal of m has distinct
entries, ad(m_0) is invertible on every superdiagonal and the extension is
forced.

    python3 demos/matrix_centralizer.py
"""

from specseq.drivers.matrix import MatrixProblem, matrix_centralizer

m = [
    [5, 1, 4, -5],
    [0, -6, 11, 3],
    [0, 0, 2, 7],
    [0, 0, 0, 1],
]
prob = MatrixProblem.from_lists(m, diagonal=[9, 8, 7, 6])
res = matrix_centralizer(prob)

X = res.centralizer.to_lists()
width = max(len(str(v)) for row in X for v in row)
print("centralizer with diagonal (9, 8, 7, 6):")
for row in X:
    print("  [" + "  ".join(f"{str(v):>{width}}" for v in row) + "]")
print(f"unique: {res.unique} (the kernel of ad(m) has dimension {res.kernel_dim})")

for step in res.witness.trace:
    print(f"  page {step['page']}: level {step['target_level']} {step['action']}")

# sanity check by hand: X m == m X
mm = prob.matrix
print("commutes:", (mm @ res.centralizer - res.centralizer @ mm).is_zero())
