"""Acceptance criteria, one test per criterion (or per independent clause).

Each test prints a PASS/FAIL line.  Two clauses assert gap sequences that are
strictly decreasing across n in {25, 50, 100, 200}; exact rational
arithmetic shows this is impossible for even n - N parity at the odd-to-even
step 25 -> 50 (see notes/decisions.md at the repository root), so those two
tests fail by design rather than weaken the stated property.
"""

import math
import time

import numpy as np
import pytest

import mbnsharp as m
from mbnsharp.lab import ORDERING_SLACK
from mbnsharp.mrs import freud_a_n, freud_b_n


def report(name, ok, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}")


class TestCriterion1MRSClosedForms:
    def test_root_and_integral_match_closed_forms(self):
        t0 = time.monotonic()
        worst_a = worst_b = 0.0
        for alpha in (1.5, 2.0, 3.0, 4.0):
            w = m.freud(alpha)
            for n in range(1, 201):
                a_cf, b_cf = freud_a_n(alpha, n), freud_b_n(alpha, n)
                a_rt = m.compute_a_n(w, n, method="root")
                b_it = m.compute_b_n(w, n, a_n=a_cf, method="integral")
                worst_a = max(worst_a, abs(a_rt - a_cf) / a_cf)
                worst_b = max(worst_b, abs(b_it - b_cf) / b_cf)
        elapsed = time.monotonic() - t0
        ok = worst_a < 1e-8 and worst_b < 1e-8 and elapsed < 30.0
        report("1 mrs-closed-forms", ok,
               f"(worst a: {worst_a:.2e}, worst b: {worst_b:.2e}, {elapsed:.1f}s)")
        assert worst_a < 1e-8
        assert worst_b < 1e-8
        assert elapsed < 30.0


class TestCriterion2MarkovEquivalence:
    def test_lp_matches_exact_formula(self, unw):
        t0 = time.monotonic()
        worst = 0.0
        for n in range(1, 21):
            for N in range(0, min(4, n) + 1):
                q = m.SharpConstantQuery(weight=unw, p=math.inf, N=N, n=n)
                got = m.solve_pinf(q).value
                worst = max(worst, abs(got - m.markov_constant(N, n)))
        elapsed = time.monotonic() - t0
        ok = worst < 1e-6 and elapsed < 120.0
        report("2 markov-equivalence", ok, f"(worst: {worst:.2e}, {elapsed:.1f}s)")
        assert worst < 1e-6
        assert elapsed < 120.0


@pytest.fixture(scope="module")
def labelle_values(unw):
    t0 = time.monotonic()
    vals = {N: [m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=N, n=n)).value
                for n in (25, 50, 100, 200)]
            for N in (0, 1, 2)}
    return vals, time.monotonic() - t0


class TestCriterion3LabelleLimit:
    def test_gap_below_three_percent_at_200(self, labelle_values):
        vals, elapsed = labelle_values
        gaps200 = {}
        for N in (0, 1, 2):
            E = m.reference_E(2.0, N).value
            gaps200[N] = abs(vals[N][-1] - E) / E
        ok = all(g < 0.03 for g in gaps200.values()) and elapsed < 60.0
        report("3 labelle-gap-at-200", ok,
               "(" + ", ".join(f"N={N}: {g:.4f}" for N, g in gaps200.items())
               + f", {elapsed:.1f}s)")
        for N, g in gaps200.items():
            assert g < 0.03, f"N={N}"
        assert elapsed < 60.0

    def test_gap_strictly_decreasing(self, labelle_values):
        vals, _ = labelle_values
        failures = []
        for N in (0, 1, 2):
            E = m.reference_E(2.0, N).value
            gaps = [abs(v - E) / E for v in vals[N]]
            if not all(b < a for a, b in zip(gaps, gaps[1:])):
                failures.append((N, [f"{g:.5f}" for g in gaps]))
        report("3 labelle-gap-monotone", not failures, f"{failures}")
        assert not failures, (
            f"gap not strictly decreasing for {failures}; the odd-to-even "
            f"parity step 25->50 provably breaks this (notes/decisions.md)")


class TestCriterion4WeightedTrend:
    def test_limits_and_variant_agreement(self, criterion4_sweeps):
        bad_gap, bad_agree = [], []
        for (p, N), rows in criterion4_sweeps.items():
            assert all(r.status == "ok" for r in rows), rows
            E = m.reference_E(p, N).value
            last = rows[-1]
            for tag, v in (("M", last.M), ("M*", last.M_star)):
                g = abs(v - E) / E
                if g >= 0.10:
                    bad_gap.append((p, N, tag, g))
            if abs(last.M - last.M_star) / last.M_star >= 0.01:
                bad_agree.append((p, N, abs(last.M - last.M_star) / last.M_star))
        ok = not bad_gap and not bad_agree
        report("4 weighted-limits-and-agreement", ok, f"{bad_gap} {bad_agree}")
        assert not bad_gap
        assert not bad_agree

    def test_gap_decreasing_over_dyadic(self, criterion4_sweeps):
        failures = []
        for (p, N), rows in criterion4_sweeps.items():
            assert all(r.status == "ok" for r in rows), rows
            E = m.reference_E(p, N).value
            for tag in ("M", "M_star"):
                gaps = [abs(getattr(r, tag) - E) / E for r in rows]
                if not all(b <= a + ORDERING_SLACK for a, b in zip(gaps, gaps[1:])):
                    failures.append((p, N, tag, [f"{g:.5f}" for g in gaps]))
        report("4 weighted-gap-monotone", not failures, f"{failures}")
        assert not failures, (
            f"gap not decreasing for {failures}; the odd-to-even parity step "
            f"25->50 provably breaks this (notes/decisions.md)")


class TestCriterion5GorbachevBand:
    def test_l1_constant_inside_widened_band(self, unw):
        t0 = time.monotonic()
        res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=1.0, N=0, n=200))
        elapsed = time.monotonic() - t0
        lo, hi = m.GORBACHEV_BAND
        ok = 0.95 * lo <= res.value <= 1.05 * hi and elapsed < 120.0
        report("5 gorbachev-band", ok,
               f"(value {res.value:.7f} in [{0.95 * lo:.7f}, {1.05 * hi:.7f}], "
               f"{elapsed:.1f}s)")
        assert 0.95 * lo <= res.value <= 1.05 * hi
        assert elapsed < 120.0


class TestCriterion6OrderingAndBounds:
    def test_ordering_uniform_direction(self, criterion4_sweeps, unw):
        t0 = time.monotonic()
        families = list(criterion4_sweeps.values())
        families.append(m.sweep(unw, 2.0, 1, [10, 20, 40]))
        families.append(m.sweep(m.erdos_exp(2.0, 1), 2.0, 0, [6, 12, 24]))
        ok = True
        for rows in families:
            rep = m.verify_invariants(rows)
            ok = ok and rep.checks["ordering"] and rep.checks["bounded"]
        report("6 ordering-uniform", ok, f"({time.monotonic() - t0:.1f}s)")
        assert ok

    def test_unnormalized_sup_nondecreasing(self, criterion4_sweeps):
        ok = True
        for (p, N), rows in criterion4_sweeps.items():
            assert all(r.status == "ok" for r in rows), rows
            inv_p = 0.0 if math.isinf(p) else 1.0 / p
            unnorm = [r.M * r.b_n ** (N + inv_p) for r in rows]
            ok = ok and all(b >= a * (1.0 - 1e-10) for a, b in zip(unnorm, unnorm[1:]))
        report("6 unnormalized-sup-monotone", ok)
        assert ok

    def test_random_candidates_below_solver(self, freud2, unw):
        t0 = time.monotonic()
        rng = np.random.default_rng(2024)
        cases = [
            (freud2, 2.0, 0, 16, "restricted", 500),
            (unw, math.inf, 1, 9, "full", 500),
        ]
        worst_excess = -math.inf
        for w, p, N, n, variant, count in cases:
            q = m.SharpConstantQuery(weight=w, p=p, N=N, n=n, variant=variant)
            best = m.solve(q).value
            b_n = m.compute_b_n(w, n)
            dom = m.restricted_domain(q)
            inv_p = 0.0 if math.isinf(p) else 1.0 / p
            for _ in range(count):
                P = m.Polynomial(coeffs=tuple(rng.standard_normal(n + 1)))
                r = b_n ** (-N - inv_p) * abs(P.derivative_at_zero(N)) \
                    / m.weighted_Lp_norm(P, w, p, dom)
                worst_excess = max(worst_excess, r - best)
        ok = worst_excess <= 1e-8
        report("6 random-candidates", ok,
               f"(worst excess {worst_excess:.2e}, {time.monotonic() - t0:.1f}s)")
        assert worst_excess <= 1e-8

    def test_coefficient_diagnostic_stable(self, freud2, unw):
        t0 = time.monotonic()
        rep1 = m.coefficient_growth_diagnostic(freud2, 2.0, [25, 50, 100, 200], 3, 0.1)
        rep2 = m.coefficient_growth_diagnostic(unw, math.inf, [10, 20, 40], 3, 0.1)
        elapsed = time.monotonic() - t0
        ok = rep1.passed and rep2.passed and elapsed < 300.0
        report("6 coefficient-diagnostic", ok,
               f"(sup per k: {rep1.sup_per_k}, {elapsed:.1f}s)")
        assert rep1.passed
        assert rep2.passed
        assert elapsed < 300.0


class TestCriterion7CrossSolverOracle:
    def test_general_p2_matches_exact_route_random_instances(self):
        t0 = time.monotonic()
        rng = np.random.default_rng(7)
        pool = ["unweighted", "freud:1.5", "freud:2", "freud:3", "erdos:2:1",
                "bounded:1"]
        worst = 0.0
        for _ in range(20):
            spec = pool[rng.integers(len(pool))]
            w = m.parse_weight(spec)
            N = int(rng.integers(0, 3))
            n = int(rng.integers(max(2, N + 1), 25))
            variant = "restricted" if rng.integers(2) else "full"
            q = m.SharpConstantQuery(weight=w, p=2.0, N=N, n=n, variant=variant)
            a = m.solve_general_p(q).value
            b = m.solve_p2(q).value
            worst = max(worst, abs(a - b) / b)
        elapsed = time.monotonic() - t0
        ok = worst < 1e-6 and elapsed < 120.0
        report("7 cross-solver-p2", ok, f"(worst rel: {worst:.2e}, {elapsed:.1f}s)")
        assert worst < 1e-6
        assert elapsed < 120.0

    def test_recurrence_route_matches_gram_route(self):
        t0 = time.monotonic()
        worst = 0.0
        for spec in ("unweighted", "freud:2", "freud:3"):
            w = m.parse_weight(spec)
            for n in (6, 18, 30):
                for N in (0, 2):
                    for variant in ("full", "restricted"):
                        q = m.SharpConstantQuery(weight=w, p=2.0, N=N, n=n,
                                                 variant=variant)
                        rec = m.solve_p2(q).value
                        gram = m.gram_route_value(q)
                        worst = max(worst, abs(rec - gram) / gram)
        elapsed = time.monotonic() - t0
        ok = worst < 1e-8 and elapsed < 120.0
        report("7 gram-route", ok, f"(worst rel: {worst:.2e}, {elapsed:.1f}s)")
        assert worst < 1e-8
        assert elapsed < 120.0
