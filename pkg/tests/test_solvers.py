import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

import mbnsharp as m


def ratio(P, w, p, N, domain, b_n):
    """Direct candidate ratio b_n^(-N-1/p) |P^(N)(0)| / ||P W||_p."""
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    norm = m.weighted_Lp_norm(P, w, p, domain)
    return b_n ** (-N - inv_p) * abs(P.derivative_at_zero(N)) / norm


class TestPolynomial:
    def test_derivative_at_zero_identity(self):
        P = m.Polynomial(coeffs=(1.0, 2.0, 3.0, 4.0))
        for N in range(6):
            expect = math.factorial(N) * P.coeffs[N] if N <= P.degree else 0
            assert P.derivative_at_zero(N) == expect

    def test_exact_rational_coefficients(self):
        P = m.Polynomial(coeffs=(Fraction(1, 3), Fraction(2, 7)))
        assert P.derivative_at_zero(1) == Fraction(2, 7)
        assert P(0.0) == pytest.approx(1.0 / 3.0, rel=1e-15)

    def test_zero(self):
        assert m.Polynomial.zero(3).degree == 3
        assert m.Polynomial.zero(3).derivative_at_zero(1) == 0


class TestQueryValidation:
    def test_rejects_bad_fields(self, unw):
        with pytest.raises(ValueError):
            m.SharpConstantQuery(weight=unw, p=-1.0, N=0, n=1)
        with pytest.raises(ValueError):
            m.SharpConstantQuery(weight=unw, p=2.0, N=-1, n=1)
        with pytest.raises(ValueError):
            m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=0)
        with pytest.raises(ValueError):
            m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=1, variant="half")

    def test_trivial_above_degree(self, unw):
        q = m.SharpConstantQuery(weight=unw, p=2.0, N=3, n=2)
        res = m.solve(q)
        assert res.value == 0.0 and res.certified


class TestRestrictedDomain:
    def test_power_weight(self, freud2):
        q = m.SharpConstantQuery(weight=freud2, p=2.0, N=0, n=4, variant="restricted")
        assert m.restricted_domain(q) == pytest.approx((-2.0, 2.0), rel=1e-14)

    def test_full_interval_unbounded(self, freud2):
        q = m.SharpConstantQuery(weight=freud2, p=2.0, N=0, n=4, variant="full")
        assert m.restricted_domain(q) == (-math.inf, math.inf)

    def test_unweighted_convention(self, unw):
        q = m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=4, variant="restricted")
        assert m.restricted_domain(q) == (-1.0, 1.0)


class TestSolveP2:
    def test_linear_unweighted(self, unw):
        res = m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=1))
        assert res.value == pytest.approx(2.0 ** -0.5, rel=1e-12)

    def test_quadratic_unweighted(self, unw):
        res = m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=2))
        assert res.value == pytest.approx(0.75, rel=1e-12)

    def test_second_derivative_unweighted(self, unw):
        res = m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=2, n=2))
        assert res.value == pytest.approx(3.0 * math.sqrt(2.5) / 2.0 ** 2.5, rel=1e-12)

    def test_value_matches_extremal_ratio(self, unw, freud2):
        for w, variant in ((unw, "full"), (freud2, "restricted"), (freud2, "full")):
            q = m.SharpConstantQuery(weight=w, p=2.0, N=1, n=8, variant=variant)
            res = m.solve_p2(q)
            b_n = m.compute_b_n(w, q.n)
            dom = m.restricted_domain(q)
            assert ratio(res.extremal, w, 2.0, 1, dom, b_n) == pytest.approx(
                res.value, rel=1e-6)

    def test_extremal_sign_convention(self, unw):
        res = m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=1, n=5))
        assert res.extremal.derivative_at_zero(1) > 0

    @pytest.mark.parametrize("spec,variant,N,n", [
        ("unweighted", "full", 0, 12),
        ("unweighted", "full", 2, 17),
        ("freud:2", "restricted", 0, 10),
        ("freud:2", "full", 1, 15),
        ("freud:1.5", "full", 0, 8),
        ("freud:3", "restricted", 2, 21),
    ])
    def test_gram_route_agrees(self, spec, variant, N, n):
        w = m.parse_weight(spec)
        q = m.SharpConstantQuery(weight=w, p=2.0, N=N, n=n, variant=variant)
        res = m.solve_p2(q)
        gram = m.gram_route_value(q)
        assert res.value == pytest.approx(gram, rel=1e-8)

    def test_gram_certificate_recorded(self, unw):
        res = m.solve_p2(m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=6))
        assert res.certificate["gram_residual"] < 1e-10


class TestSolvePinf:
    def test_even_degree_five(self, unw):
        res = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=0, n=5))
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_first_derivative_cubic(self, unw):
        res = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=1, n=3))
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_first_derivative_linear(self, unw):
        res = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=1, n=1))
        assert res.value == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("N,n", [(0, 4), (1, 6), (2, 7), (3, 9), (4, 12)])
    def test_matches_exact_formula(self, unw, N, n):
        res = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=N, n=n))
        assert res.value == pytest.approx(m.markov_constant(N, n), abs=1e-8)

    def test_equioscillation_certificate(self, unw):
        res = m.solve_pinf(m.SharpConstantQuery(weight=unw, p=math.inf, N=1, n=7))
        assert res.certificate["active_constraints"] >= res.certificate["free_coefficients"]

    def test_weighted_full_window_check(self, freud2):
        res = m.solve_pinf(m.SharpConstantQuery(weight=freud2, p=math.inf, N=1,
                                                n=12, variant="full"))
        assert res.certificate["window_check"]
        assert res.certified

    def test_weighted_value_matches_extremal_ratio(self, freud2):
        q = m.SharpConstantQuery(weight=freud2, p=math.inf, N=1, n=10, variant="restricted")
        res = m.solve_pinf(q)
        b_n = m.compute_b_n(freud2, q.n)
        assert ratio(res.extremal, freud2, math.inf, 1, m.restricted_domain(q),
                     b_n) == pytest.approx(res.value, rel=1e-6)


class TestSolveGeneralP:
    def test_l1_linear(self, unw):
        res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=1.0, N=0, n=1))
        assert res.value == pytest.approx(0.5, rel=1e-9)
        assert res.certified

    def test_p2_matches_exact_route(self, unw):
        res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=2.0, N=0, n=2))
        assert res.value == pytest.approx(0.75, rel=1e-8)

    def test_p4_linear(self, unw):
        res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=4.0, N=0, n=1))
        assert res.value == pytest.approx(2.0 ** -0.25, rel=1e-9)

    def test_below_one_uncertified_and_matches_1d_oracle(self, unw):
        # degree 1, N = 0, p = 1/2: by the closed form
        # integral of |1 + b x|^(1/2) = (2/(3b)) ((1+b)^(3/2) -+ (1-b)^(3/2)),
        # the constant is the reciprocal square of its minimum over b.
        def F(b):
            if b == 0.0:
                return 2.0
            s = (1.0 + b) ** 1.5
            t = (1.0 - b) ** 1.5 if b <= 1.0 else -(b - 1.0) ** 1.5
            return 2.0 / (3.0 * b) * (s - t)

        opt = minimize_scalar(F, bounds=(0.0, 4.0), method="bounded",
                              options={"xatol": 1e-12})
        oracle = opt.fun ** -2.0
        res = m.solve_general_p(m.SharpConstantQuery(weight=unw, p=0.5, N=0, n=1))
        assert not res.certified
        assert res.value == pytest.approx(oracle, rel=1e-6)

    def test_weighted_p1_value_matches_extremal_ratio(self, freud2):
        q = m.SharpConstantQuery(weight=freud2, p=1.0, N=0, n=6, variant="restricted")
        res = m.solve_general_p(q)
        b_n = m.compute_b_n(freud2, q.n)
        assert ratio(res.extremal, freud2, 1.0, 0, m.restricted_domain(q),
                     b_n) == pytest.approx(res.value, rel=1e-6)


class TestCrossSolverAndInvariants:
    @pytest.mark.parametrize("spec,variant,N,n", [
        ("unweighted", "full", 0, 9),
        ("freud:2", "restricted", 1, 11),
        ("freud:3", "full", 0, 7),
        ("erdos:2:1", "restricted", 0, 6),
        ("bounded:1", "restricted", 1, 8),
    ])
    def test_general_p2_matches_exact_route(self, spec, variant, N, n):
        w = m.parse_weight(spec)
        q = m.SharpConstantQuery(weight=w, p=2.0, N=N, n=n, variant=variant)
        assert m.solve_general_p(q).value == pytest.approx(
            m.solve_p2(q).value, rel=1e-6)

    @pytest.mark.parametrize("p", [1.0, 2.0])
    def test_full_below_restricted(self, freud2, p):
        # the restricted norm is smaller, so the restricted constant dominates
        for n in (5, 12):
            qf = m.SharpConstantQuery(weight=freud2, p=p, N=1, n=n, variant="full")
            qr = m.SharpConstantQuery(weight=freud2, p=p, N=1, n=n, variant="restricted")
            assert m.solve(qf).value <= m.solve(qr).value + 1e-8

    def test_random_candidates_never_beat_solver(self, freud2):
        n, rng = 9, np.random.default_rng(42)
        b_n = m.compute_b_n(freud2, n)
        for p, N in ((2.0, 0), (math.inf, 1)):
            q = m.SharpConstantQuery(weight=freud2, p=p, N=N, n=n, variant="restricted")
            best = m.solve(q).value
            dom = m.restricted_domain(q)
            for _ in range(60):
                P = m.Polynomial(coeffs=tuple(rng.standard_normal(n + 1)))
                assert ratio(P, freud2, p, N, dom, b_n) <= best + 1e-8

    def test_scale_invariance_of_candidate_ratio(self, freud2):
        rng = np.random.default_rng(3)
        b_n = m.compute_b_n(freud2, 6)
        P = m.Polynomial(coeffs=tuple(rng.standard_normal(7)))
        lam = 37.5
        Pl = m.Polynomial(coeffs=tuple(lam * c for c in P.coeffs))
        for p in (1.0, 2.0, math.inf):
            r1 = ratio(P, freud2, p, 1, (-3.0, 3.0), b_n)
            r2 = ratio(Pl, freud2, p, 1, (-3.0, 3.0), b_n)
            assert r2 == pytest.approx(r1, rel=1e-10)

    def test_opposite_parity_never_helps(self, freud2):
        # adding the omitted parity to the extremal cannot raise the ratio
        q = m.SharpConstantQuery(weight=freud2, p=2.0, N=0, n=8, variant="restricted")
        res = m.solve_p2(q)
        b_n = m.compute_b_n(freud2, 8)
        dom = m.restricted_domain(q)
        rng = np.random.default_rng(5)
        base = np.asarray(res.extremal.coeffs)
        for _ in range(20):
            noise = np.zeros_like(base)
            noise[1::2] = 0.3 * rng.standard_normal(len(noise[1::2]))
            P = m.Polynomial(coeffs=tuple(base + noise))
            assert ratio(P, freud2, 2.0, 0, dom, b_n) <= res.value + 1e-8

    def test_unnormalized_sup_nondecreasing_in_n(self, freud2):
        # fixed norm domain (full variant): a larger degree cannot do worse
        prev = -math.inf
        for n in (4, 8, 16, 32):
            b_n = m.compute_b_n(freud2, n)
            q = m.SharpConstantQuery(weight=freud2, p=2.0, N=1, n=n, variant="full")
            unnorm = m.solve_p2(q).value * b_n ** 1.5
            assert unnorm >= prev - 1e-10
            prev = unnorm
