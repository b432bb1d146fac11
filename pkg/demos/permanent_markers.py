"""
Diagonal markers and the permanent
==================================

Differentiating the permanent along a set R of diagonal variables leaves the
permanent of the complementary minor.  Its product of remaining diagonal
entries appears in that derivative and in no other one, which forces
independence.
"""

from math import comb

from spdp.algebra import Monomial, format_polynomial
from spdp.core import SpdpParams, codimension
from spdp.families import diagonal_marker, permanent, sub_permanent_generators

d = 3
for R, q in sub_permanent_generators(d, 1):
    marker = Monomial(d * d, diagonal_marker(d, R))
    print(f"R={[i + 1 for i in R]}  d_R Perm = {format_polynomial(q):<16} marker {marker}")

print()
for d in range(2, 6):
    kappa = d // 2
    rep = codimension(permanent(d), SpdpParams(kappa, 0))
    print(f"d={d} kappa={kappa}: gamma={rep.gamma:4d}  guaranteed >= {comb(d, kappa)}")
