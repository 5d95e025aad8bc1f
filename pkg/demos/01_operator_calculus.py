"""Pseudodifferential operators with exact rational coefficients.

Run:  python3 demos/01_operator_calculus.py
"""

from fracsato import PsDO, parse_psdo, psdo_adjoint, psdo_invert, schur_dress

D, x = PsDO.D(1), PsDO.x(1)

print("Leibniz rule, both directions")
print("  D * x      =", D * x)
print("  D^-1 * x   =", PsDO.D(-1) * x)

# Inverses of differential operators are infinite series; we keep a window.
L = parse_psdo("D^2 + (1 + x)*D^0")
Li = psdo_invert(L, depth=5, prec=6)
print("\nL      =", L)
print("L^-1   =", Li)
print("L*L^-1 =", L * Li)

print("\nadjoint of x D:", psdo_adjoint(x * D))

# Every normalized operator is a conjugate of a pure power of D.
U = schur_dress(L, depth=4)
print("\ndressing U of L:", U)
print("U D^2 U^-1 - L =", U * PsDO.D(2) * psdo_invert(U, depth=4) - L)
