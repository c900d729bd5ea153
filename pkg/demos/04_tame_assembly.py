"""The three-vertex tame quiver: tube discovery, embedding, assembled basis.

Everything about the rank-two tube is discovered computationally: the
quasi-simple roots, the tau-orbit, and where the embedded Kronecker tube
point lands.  The assembled basis elements are ordered products of a
preprojective class function, a tube basis element, a homogeneous regular
class function and a preinjective class function.
"""

from hallq import tame
from hallq import tame_basis as tb
from hallq.partitions import MultiPartition

delta, preps, preis, quasi = tame.root_system()
print("delta =", delta)
print("first preprojective roots:", preps[:5])
print("first preinjective roots (largest first):", preis[:5])

td = tame.tube_data()
print("tube rank:", td.rank, " quasi-simple roots:", td.quasi_roots)

ctx = tb.context()
print("embedded Kronecker tube point lands on tube component:", ctx.k1)

print()
print("The transported regular class function M(1):")
print("  ", ctx.m_fn((1,)))

print()
print("Assembled basis at the isotropic grade (1,1,1):")
for c in ctx.bc_index_set((1, 1, 1)):
    print("  index", c)
    print("      =", ctx.bc_element(c))

print()
print("Sanity: the two imaginary-direction generators are independent:")
for r in ctx.verify_multiplicity_bookkeeping():
    print("  ", r.status.upper(), r.check_id)
