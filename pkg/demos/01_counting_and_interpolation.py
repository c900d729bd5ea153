"""Counting filtrations over several primes and reading off Euler numbers.

The whole toolkit rests on one numerical move: count the F_p-points of a
filtration variety for several primes, fit the counting polynomial in q,
verify it on two held-out primes, and evaluate at q = 1.
"""

from hallq import KroneckerClass, shared_engine

e = shared_engine("kronecker")
fam = e.fam

s1 = fam.simple_class(1)
two_s1 = KroneckerClass((0, 0), (), ())

print("Submodule lines of the square of the projective simple:")
poly = e.count_polynomial([s1], [s1], two_s1)
print("  counting polynomial:", poly)
print("  value at q=1 (the Euler number):", poly.at_one())

print()
print("A filtration with a unique point, constant in p:")
reg = KroneckerClass((), (1,), ())        # indecomposable regular, dim (1,1)
s2 = fam.simple_class(2)
poly = e.count_polynomial([s2], [s1], reg)
print("  counting polynomial:", poly)

print()
print("Counting polynomials of complete flags are q-factorials:")
for t in range(1, 5):
    print(f"  t = {t}:", e.flag_count_polynomial(1, t))
