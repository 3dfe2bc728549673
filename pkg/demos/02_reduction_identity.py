"""S(h; p^2) computed two ways: over all of V(Z/p^2Z), and by lifting points of V(F_p).

Run: python demos/02_reduction_identity.py
"""

import itertools

from stratsum import parse_poly, prime_square, sum_bruteforce, sum_reduction

F = parse_poly("x1^2*x2 + x2^2*x3 + x3^2*x1", 3)
p = 5
agree = 0
hs = list(itertools.product(range(p * p), repeat=3))[::97]
for h in hs:
    slow = sum_bruteforce(F, h, prime_square(p))
    fast = sum_reduction(F, h, p)
    agree += slow == fast
print(f"{agree}/{len(hs)} sampled h give identical exact values")

h = (0, 0, 1)  # an axis vector, where the sum is large
s = sum_reduction(F, h, p)
print(f"S({h}; {p}^2) = {s.approx:.6f}, |S| = {s.magnitude:.6f}")
print("exact coefficients on zeta^0..zeta^19:", s.exact.coeffs)
