"""The inner sum over F_p^n: sum_z e_p(a.z) e_p(c + b.z), and its closed form.

It vanishes unless a and b are parallel, and then has size p^(n-1) or p^n.

Run: python demos/03_inner_sum.py
"""

import itertools

from stratsum import TpArgs, t_p_bruteforce, t_p_closed

p, n = 5, 2
sizes = {}
for a, b in itertools.product(itertools.product(range(p), repeat=n), repeat=2):
    for c in range(p):
        args = TpArgs(a, b, c)
        closed = t_p_closed(args, p)
        assert closed == t_p_bruteforce(args, p)
        sizes[round(closed.magnitude)] = sizes.get(round(closed.magnitude), 0) + 1
print(f"p={p}, n={n}: magnitudes and how often they occur:", dict(sorted(sizes.items())))
