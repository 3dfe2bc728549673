"""Estimated strata G_j = {h : dim W_h >= j} and their growth across primes.

Run: python demos/04_stratification.py
"""

from stratsum import bound_report, build_strata, codim_report, parse_poly

F = parse_poly("x1^3+x2^3+x3^3", 3)
tables = [build_strata(F, p) for p in (5, 7, 11)]
for t in tables:
    print(f"p={t.p:2d}  #G_j for j=0..3: {t.sizes}")
rep = codim_report(tables[0], tables[1:])
for j, r in enumerate(rep.ratios):
    print(f"j={j}  #G_j / p^(3-j): {[round(x, 3) for x in r]}")
print("codimension check:", "pass" if rep.passed else "fail")

# Generic h lies outside G_1, so the bound exponent is n - 1 = 2.
r = bound_report(F, (1, 1, 1), 7, table=tables[1])
print(f"h=(1,1,1) mod 7^2: |S| = {r.value.magnitude:.3f} <= {r.bound}, exponent {r.exponent}")

# Binary forms: G_1 picks up the gradient directions of the rational lines of V.
conic = parse_poly("x1^2+x2^2", 2)
for p in (3, 5, 7, 13):
    print(f"x1^2+x2^2 at p={p}: #G_1 = {build_strata(conic, p).sizes[1]}")
