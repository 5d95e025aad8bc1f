"""Commuting fractional operators still satisfy an algebraic relation.

P = D and Q = D + D^-1 commute; the relation between them and the span
growth of their monomials come out of exact linear algebra on expansions.
"""

from fracsato import FracOp, PsDO, dord, frac_make, span_dim
from fracsato.relations import bc_relation

D, one = PsDO.D(1), PsDO.const(1)
P = FracOp.from_psdo(D)
Q = P + frac_make(one, D)
print("Q =", Q, "  expansion:", Q.expansion())
print("dord P =", dord(P).dord, " dord Q =", dord(Q).dord)

F, rep = bc_relation(P, Q, return_report=True)
print("\nrelation F(z, w) =", F, " (found with n =", rep.n_used, ")")
print("order of P - Q:", (P - Q).expansion().order)

print("\nspan growth of {P^i Q^j : i, j <= n}:")
for n in (1, 2, 3):
    r = span_dim(P, Q, n)
    print(f"   n={n}: dim {r.span_dim}  (bound {r.bound})")
