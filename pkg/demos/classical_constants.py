#!/usr/bin/env python3
"""Classical sharp constants on (-1, 1) and the solver routes that match them.

The sup-norm constants for the N-th derivative at 0 come from Chebyshev
polynomial derivatives in exact integer arithmetic; the semi-infinite LP
reproduces them to ~1e-10.  The L2 constants come from the orthonormal
expansion and are cross-checked against a high-precision Gram-matrix solve.
"""

import math

import mbnsharp as m

unw = m.unweighted()

print("Chebyshev derivative values at 0 (exact integers):")
for (n, N) in [(3, 1), (4, 0), (5, 3), (7, 1), (10, 2)]:
    print(f"  T_{n}^({N})(0) = {m.chebyshev_derivative_at_zero(n, N)}")

print()
print("Sup-norm constants: exact formula vs linear program")
print(f"{'n':>4} {'N':>3} {'formula':>18} {'LP solve':>18} {'diff':>10}")
for (n, N) in [(5, 0), (3, 1), (6, 2), (9, 3), (12, 4)]:
    exact = m.markov_constant(N, n)
    got = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=N, n=n)).value
    print(f"{n:>4} {N:>3} {exact:>18.12f} {got:>18.12f} {abs(exact-got):>10.2e}")

print()
print("L2 constants: orthonormal-expansion route vs monomial-Gram route")
print(f"{'n':>4} {'N':>3} {'recurrence':>18} {'gram':>18} {'rel diff':>10}")
for (n, N) in [(2, 0), (2, 2), (12, 0), (25, 1)]:
    q = m.SharpConstantQuery(weight=unw, p=2.0, N=N, n=n)
    rec = m.solve_p2(q).value
    gram = m.gram_route_value(q)
    print(f"{n:>4} {N:>3} {rec:>18.12f} {gram:>18.12f} {abs(rec-gram)/gram:>10.2e}")

print()
print("Known limit constants for entire functions of exponential type:")
for (p, N) in [(math.inf, 0), (2.0, 0), (2.0, 1), (1.0, 0), (3.0, 0)]:
    ref = m.reference_E(p, N)
    if ref.kind == "exact":
        print(f"  p={p}, N={N}: {ref.value:.10f} (exact)")
    elif ref.kind == "bounds":
        print(f"  p={p}, N={N}: in ({ref.lo:.10f}, {ref.hi:.10f}) (two-sided bounds)")
    else:
        print(f"  p={p}, N={N}: unknown (only finite-degree estimates exist)")

print()
print("An L1 estimate at large degree lands inside the two-sided band:")
res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=1.0, N=0, n=200))
lo, hi = m.GORBACHEV_BAND
print(f"  degree-200 constant: {res.value:.8f}; band ({lo:.8f}, {hi:.8f})")
