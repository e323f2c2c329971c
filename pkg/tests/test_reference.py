import math

import pytest

import mbnsharp as m
from mbnsharp.reference import chebyshev_coefficients


class TestChebyshevDerivatives:
    def test_cubic_first_derivative(self):
        # T_3 = 4x^3 - 3x
        assert m.chebyshev_derivative_at_zero(3, 1) == -3

    def test_quartic_value(self):
        # T_4 = 8x^4 - 8x^2 + 1
        assert m.chebyshev_derivative_at_zero(4, 0) == 1

    def test_quintic_third_derivative(self):
        # coefficient of x^3 in T_5 is -20; times 3!
        assert m.chebyshev_derivative_at_zero(5, 3) == -120

    def test_parity_mismatch_and_overflow_degree(self):
        assert m.chebyshev_derivative_at_zero(4, 1) == 0
        assert m.chebyshev_derivative_at_zero(3, 5) == 0

    def test_exact_big_integers(self):
        # leading coefficient of T_n is 2^(n-1): past any float or int64
        assert chebyshev_coefficients(200)[200] == 2**199
        assert chebyshev_coefficients(64)[64] == 2**63

    def test_first_derivative_is_n_for_odd_n(self):
        for n in range(1, 100, 2):
            assert abs(m.chebyshev_derivative_at_zero(n, 1)) == n


class TestMarkovConstant:
    def test_even_case_value_one(self):
        assert m.markov_constant(0, 6) == 1.0

    def test_first_derivative(self):
        assert m.markov_constant(1, 5) == 1.0

    def test_second_derivative(self):
        assert m.markov_constant(2, 3) == pytest.approx(4.0 / 9.0, rel=1e-15)

    def test_zeroth_always_one(self):
        assert all(m.markov_constant(0, n) == 1.0 for n in range(1, 60))

    def test_rejects_N_above_n(self):
        with pytest.raises(ValueError):
            m.markov_constant(4, 3)

    def test_converges_to_limit_constant(self):
        E = m.reference_E(math.inf, 0).value
        for N in range(0, 5):
            gap10 = abs(m.markov_constant(N, 10) - E)
            gap50 = abs(m.markov_constant(N, 50) - E)
            assert gap50 <= gap10 + 1e-15


class TestReferenceE:
    def test_sup_norm_case(self):
        ref = m.reference_E(math.inf, 3)
        assert ref.kind == "exact" and ref.value == 1.0

    def test_l2_case(self):
        ref = m.reference_E(2.0, 1)
        assert ref.kind == "exact"
        assert ref.value == pytest.approx((3.0 * math.pi) ** -0.5, rel=1e-15)
        assert ref.value == pytest.approx(0.3257350, abs=1e-7)

    def test_l1_band(self):
        ref = m.reference_E(1.0, 0)
        assert ref.kind == "bounds"
        assert ref.lo == pytest.approx(0.5409 / math.pi, rel=1e-15)
        assert ref.hi == pytest.approx(0.5484 / math.pi, rel=1e-15)
        assert 0.172 < ref.lo < ref.hi < 0.175

    def test_unknown_elsewhere(self):
        assert m.reference_E(1.0, 1).kind == "unknown"
        assert m.reference_E(3.0, 0).kind == "unknown"
        assert m.reference_E(0.5, 2).kind == "unknown"

    def test_validation(self):
        with pytest.raises(ValueError):
            m.reference_E(0.0, 0)
        with pytest.raises(ValueError):
            m.reference_E(2.0, -1)
