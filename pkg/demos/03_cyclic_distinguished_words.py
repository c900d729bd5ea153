"""Generic extensions, distinguished words and the cyclic integral basis.

Words in the vertex alphabet multiply through generic extensions onto
aperiodic classes; each aperiodic class receives a certified word whose
divided monomial is unitriangular, and the triangular correction yields
the integral basis elements.
"""

from hallq import cyclic_basis as cb
from hallq.partitions import Word

ctx = cb.context(2)

print("The word monoid on the rank-2 cyclic quiver:")
for letters in ([1, 2], [2, 1], [1, 1], [1, 2, 1]):
    print(f"  wp({''.join(map(str, letters))}) =", ctx.wp(Word(letters)))

print()
print("Distinguished words for weight (2, 2):")
for pi, w in sorted(ctx.section_for((2, 2)).items(),
                    key=lambda kv: kv[0].sort_key()):
    counts = [ctx.layered_count(pi, w, p) for p in (2, 3)]
    print(f"  {pi}: word {w} (filtration counts at two primes: {counts})")

print()
print("The basis elements of weight (2, 2):")
basis = ctx.build_E_basis((2, 2))
for pi in ctx.aperiodic_order((2, 2)):
    print(f"  E_{pi} =", basis[pi])

print()
print("Full verification for weight (2, 2):")
for r in ctx.verify_suite((2, 2)):
    print("  ", r.status.upper(), r.check_id)
