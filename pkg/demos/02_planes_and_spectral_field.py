"""A plane whose spectral algebra is trivial but whose spectral field is not.

W is spanned by z^n + n z^(n-2).  No non-constant polynomial multiplies W
into itself, yet z moves W by a single dimension, so z lies in the spectral
field and conjugates to a fractional (not differential) operator.
"""

from fracsato import (
    ZSeries,
    certify_differential,
    conjugate_spectral,
    dressing_from_plane,
    example_4_5,
    frac_certify,
    quotient_dim,
    rank,
    spectral_membership,
    spectral_polynomials,
)

W = example_4_5(14)
z = ZSeries.monomial(1)
print("first basis vectors:")
for v in W.basis[:6]:
    print("   ", v)

print("\npolynomials f of degree <= 6 with fW in W:", [str(f) for f in spectral_polynomials(W, 6)])
c = spectral_membership(W, z * z)
print("z^2 W in W?", c.verdict.value, "witness residual", c.witness["residual"])

q = quotient_dim(W, z)
print("\ndim (W + zW)/W =", q.quotient_dim, "stabilized:", q.stabilized)
print("rank of W over the field generated by z:", rank(W, z, 8).rank)

U = dressing_from_plane(W, jmax=8, prec=8)
C = conjugate_spectral(U, z)
print("\nU z(D) U^-1 is differential?", certify_differential(C).verdict.value)
fc = frac_certify(C)
print("...but fractional:", fc.verdict.value, "with right denominator", fc.witness["denominator"])
