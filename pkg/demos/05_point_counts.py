"""#V(Z/p^2Z) against p^(n-1) (#V(F_p) - 1) + p^n for smooth forms.

Run: python demos/05_point_counts.py
"""

from stratsum import count_mod_p2, parse_poly

for text, n in [("x1^2+x2^2", 2), ("x1^3+x2^3+x3^3", 3), ("x1^4+x2^4+x3^4", 3)]:
    F = parse_poly(text, n)
    for p in (5, 7):
        if F.degree % p == 0:
            continue
        lc = count_mod_p2(F, p)
        print(f"{text:>18} p={p}: N1={lc.n1:4d}  N2={lc.n2_enum:6d}  formula={lc.n2_formula:6d}  agree={lc.agree}")
