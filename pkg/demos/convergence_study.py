#!/usr/bin/env python3
"""Convergence of the normalized constants to their entire-function limits.

Runs dyadic sweeps for the Gaussian-type weight exp(-x^2) at p = 2 and
p = inf, prints the gap tables, extrapolates the limits, and writes the
combined CSV that the report tool turns into figures:

    python demos/convergence_study.py            # writes sweep_freud2.csv
    report --in sweep_freud2.csv --out-dir figs/
"""

import math
import sys

import mbnsharp as m

out_path = sys.argv[1] if len(sys.argv) > 1 else "sweep_freud2.csv"
w = m.freud(2.0)
n_list = [25, 50, 100, 200]

all_rows = []
for (p, N) in [(2.0, 0), (2.0, 1), (math.inf, 0), (math.inf, 1)]:
    ptxt = "inf" if math.isinf(p) else format(p, "g")
    print(f"--- weight exp(-x^2), p={ptxt}, N={N}")
    rows = m.sweep(w, p, N, n_list)
    all_rows.extend(rows)
    E = m.reference_E(p, N).value
    print(f"{'n':>5} {'M':>16} {'M*':>16} {'gap':>12}")
    for r in rows:
        print(f"{r.n:>5} {r.M:>16.10f} {r.M_star:>16.10f} {r.gap:>12.3e}")
    est, spread = m.extrapolate_limit([r.M_star for r in rows], n_list)
    print(f"  limit constant {E:.10f}; extrapolated {est:.10f} "
          f"(spread {spread:.1e})")
    rep = m.verify_invariants(rows)
    print(f"  invariants: ordering {rep.details['ordering_direction']}, "
          f"bounded {rep.checks['bounded']}")
    print()

with open(out_path, "w") as fh:
    fh.write(m.rows_to_csv(all_rows))
print(f"wrote {len(all_rows)} rows to {out_path}")
print("render figures with:  report --in", out_path, "--out-dir figs/")
