#!/usr/bin/env python3
"""Tour of the exponential weight families and the class checks.

Walks through the built-in weights, shows Q, Q', Q'' and the regularity
function T = x Q'/Q on a sample, and runs the sampled class validation,
including a deliberately borderline case that fails it.
"""

import numpy as np

import mbnsharp as m

print("=" * 70)
print("Weight families")
print("=" * 70)

specs = ["freud:1.5", "freud:2", "freud:4", "erdos:2:1", "erdos:2:2", "bounded:1"]
xs = np.array([0.25, 0.5, 1.0, 1.5])

for spec in specs:
    w = m.parse_weight(spec)
    xs_ok = xs[xs < w.c]
    Wv = m.eval_W(w, xs_ok)
    Tv = m.eval_T(w, xs_ok)
    print(f"\n{spec}:  interval (-{w.c:g}, {w.c:g})")
    print("  x    :", "  ".join(f"{x:8.3f}" for x in xs_ok))
    print("  W(x) :", "  ".join(f"{v:8.5f}" for v in Wv))
    print("  T(x) :", "  ".join(f"{v:8.4f}" for v in Tv))

print()
print("=" * 70)
print("Class validation (sampled, log-spaced grid)")
print("=" * 70)

for spec in specs:
    w = m.parse_weight(spec)
    rep = m.validate_class(w)
    print(f"\n{spec}: {'PASS' if rep.passed else 'FAIL ' + str(rep.failures)}")
    print(f"  inf T (sampled)           : {rep.lambda_est:.6f}")
    print(f"  quasi-increasing constant : {rep.quasi_increasing_constant:.6f}")
    print(f"  Q''Q/Q'^2 sup (condition f): {rep.growth_ratio_constant:.6f}")

print()
print("A borderline case: Q = |x| has T identically 1, so the infimum")
print("condition T > 1 fails and the weight falls outside the class:")
w_bad = m.custom(q=lambda x: np.abs(x),
                 qp=lambda x: np.sign(np.asarray(x, dtype=float)),
                 qpp=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
rep = m.validate_class(w_bad)
print(f"  Q=|x|: passed={rep.passed}, failures={rep.failures}, "
      f"inf T = {rep.lambda_est}")
