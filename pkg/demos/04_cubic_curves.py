"""From a pointed plane cubic to a commuting pair of differential operators.

For y^2 = 4x^3 - g2 x - g3 and a rational point (a, b), the module generated
by (P - a)/P and (P' - b)/P over C[P, P'] is a rank-one plane.  Conjugating
P and P' by its dressing operator gives L2 and L3, and their relation is the
curve again.  A first-order z-side operator is checked to preserve the plane.
"""

from fracsato import (
    CurveData,
    conjugated_pair,
    dressing_from_plane,
    elliptic_plane,
    elliptic_relation,
    op_rational_section,
    psdo_invert,
    rank,
    section_check,
)
from fracsato import as_differential

for curve in (CurveData(0, 0, 1, 2), CurveData(1, -1, 1, 2)):
    print(f"curve g2={curve.g2} g3={curve.g3}, point ({curve.a}, {curve.b}), discriminant {curve.discriminant}")
    W = elliptic_plane(curve, 10)
    pair = conjugated_pair(W)
    print("   L2 =", pair.l2)
    print("   L3 =", pair.l3)
    F, _ = elliptic_relation(W, pair)
    print("   relation:", F)
    r = rank(W, W.wp, 8)
    print("   rank:", r.rank, "stabilized:", r.stabilized)

    W8 = elliptic_plane(curve, 8)
    op = op_rational_section(W8)
    U = dressing_from_plane(W8)
    conj = as_differential(U * op.to_psdo() * psdo_invert(U))
    print("   section check:", section_check(W8, op), " conjugate order:", conj.order)
    print()
