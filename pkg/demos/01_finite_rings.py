"""Arithmetic in F_p, F_{p^e} and Z/p^2Z, and exact values in Z[zeta_{p^2}].

Run: python demos/01_finite_rings.py
"""

import numpy as np

from stratsum import RootCounter, build_extension, canonicalize, cyclo_to_complex, ext_arith

# F_9 is built from the first monic irreducible quadratic over F_3 in lex order.
f9 = build_extension(3, 2)
print("F_9 modulus (low degree first):", f9.modulus_poly)
a = (1, 1)  # x + 1
print("(x+1)^2 in F_9 =", ext_arith("mul", a, a, f9))

# Elements are stored as integers; numpy arrays multiply through log tables.
print("every nonzero element times its inverse:", f9.mul(np.arange(1, 9), f9.inv(np.arange(1, 9))))

# A sum of p^2-th roots of unity is kept as a count per exponent, then reduced
# to the basis zeta^0 .. zeta^{p(p-1)-1}.  Equal complex numbers give equal tuples.
p = 3
full = RootCounter(p, (1,) * (p * p))
print("sum of all 9th roots of unity:", canonicalize(full).coeffs)
z = canonicalize(RootCounter.from_mapping(p, {6: 1}))
print("zeta^6 in the basis:", z.coeffs, "~", cyclo_to_complex(z)[0])
