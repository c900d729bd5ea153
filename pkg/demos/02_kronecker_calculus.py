"""The regular-function calculus on the Kronecker quiver.

H(n), E(n), M(omega) and P(n) are class functions on regular modules; the
products below reproduce the bracket relations of the root-vector basis
and the symmetric-function style transitions between the three regular
families.
"""

from hallq import kronecker_basis as kb
from hallq.partitions import partitions_of

ctx = kb.context()

print("Bracket of the simple class functions:")
lhs = ctx.bracket(ctx.prei_fn((0,)), ctx.prep_fn((0,)))
print("  [1_(0,1), 1_(1,0)] =", lhs)
print("  equals P(1):", lhs == ctx.p_fn(1))

print()
print("The recursion n H(n) = sum_l H(l) P(n-l):")
for n in (1, 2, 3):
    print(f"  n = {n}:", ctx.verify_ph_recursion(n).status)

print()
print("E-to-M transition at degree 3 (conjugate indexing, dominance):")
for om in partitions_of(3):
    eo = ctx.e_omega(om)
    row = {tuple(cls.regular.parts): str(c) for cls, c in eo.terms.items()}
    print(f"  E_{om} ->", row)

print()
print("A mixed product expanded in the three bases:")
prod = ctx.engine.multiply(ctx.prei_fn((0,)), ctx.prep_fn((1,)))
for kind in ("m", "h", "e"):
    coeffs = ctx.expand_in_basis(prod, kind)
    print(f"  {kind}-form:", {str(k): str(v) for k, v in coeffs.items()})
