#!/usr/bin/env python3
"""The scaling numbers a_n and b_n across weight families.

For the power weight exp(-|x|^alpha) the pair has gamma-function closed
forms, which the root-finder and quadrature reproduce to machine precision.
For the faster-growing families b_n * a_n / n approaches 1.
"""

import mbnsharp as m
from mbnsharp.mrs import freud_a_n, freud_b_n

print("Power weight alpha = 2: closed form vs root-finding")
print(f"{'n':>6} {'a_n closed':>14} {'a_n root':>14} {'b_n closed':>14} {'b_n integral':>14}")
w2 = m.freud(2.0)
for n in (1, 4, 16, 64, 200):
    a_cf = freud_a_n(2.0, n)
    a_rt = m.compute_a_n(w2, n, method="root")
    b_cf = freud_b_n(2.0, n)
    b_it = m.compute_b_n(w2, n, a_n=a_cf, method="integral")
    print(f"{n:>6} {a_cf:>14.10f} {a_rt:>14.10f} {b_cf:>14.10f} {b_it:>14.10f}")

print()
print("The ratio b_n a_n / n:")
print("  - alpha/(alpha-1), a constant, for the power weight;")
print("  - decreasing toward 1 for the fast-growing families.")
print()
for spec in ("freud:2", "freud:4", "erdos:2:1", "bounded:1"):
    w = m.parse_weight(spec)
    rows = m.mrs_table(w, [10, 40, 160, 640])
    ratios = "  ".join(f"{r.ratio:9.6f}" for r in rows)
    print(f"{spec:>10}  n=10,40,160,640:  {ratios}")

print()
print("a_n grows with n (interval where weighted polynomials live),")
print("b_n ~ n / a_n replaces the degree in the normalized constants:")
rows = m.mrs_table(m.erdos_exp(2.0, 1), [10, 100, 1000])
for r in rows:
    print(f"  n={r.n:>5}: a_n = {r.a_n:.6f}, b_n = {r.b_n:.4f}")
