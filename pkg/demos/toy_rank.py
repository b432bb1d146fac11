"""
Shifted partial derivatives of x1*x2 + x2*x3
============================================

Builds the coefficient matrix row by row, prints it, and reads off the rank.
"""

from spdp.core import SpdpParams, build_matrix, column_labels, labels_text, rank
from spdp.families import toy_example

p = toy_example()
params = SpdpParams(kappa=1, ell=1)
M = build_matrix(p, params)

# the ambient basis is every multilinear monomial of degree <= 2 in three variables
cols = column_labels(M)
print("columns:", ", ".join(cols))

# one row per (derivative set, shift monomial)
width = max(len(s) for s in labels_text(M))
for label, row in zip(labels_text(M), M.to_dense()):
    print(f"{label:>{width}}  " + " ".join(f"{int(v):2d}" for v in row))

rep = rank(M)
print(f"\nrank {rep.gamma} of {rep.ambient_dim} columns, codimension {rep.codim}")

# the missing direction is the constant: every first derivative of p is linear,
# so the column for 1 stays empty and the span stops one short of full.
for ell in range(3):
    r = rank(build_matrix(p, SpdpParams(1, ell)))
    print(f"ell={ell}: gamma={r.gamma}  N={r.ambient_dim}")
