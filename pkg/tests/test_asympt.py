import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from besselsum.asympt import (
    exact_terminating_2f1,
    fitted_constant,
    hyp_largek_neg_estimate,
    hyp_largek_pos_estimate,
    median_deviation,
    neg_checks,
    pos_checks,
    remainder_bound_profile,
)
from besselsum.core import DomainError


@given(st.integers(min_value=0, max_value=40), st.floats(min_value=-0.4, max_value=2.0), st.floats(min_value=-4.0, max_value=0.9))
@settings(max_examples=40, deadline=None)
def test_exact_polynomial_against_mpmath(k, nu, z):
    ref = mp.hyp2f1(-k, -k - 0.5, 1 + nu, z)
    assert exact_terminating_2f1(k, -0.5, nu, z) == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


class TestNegative:
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_exact_at_half_order(self, x):
        for k in range(1, 31):
            phi = math.atan(x)
            closed = (1 + x * x) ** (k + 0.5) * math.cos((2 * k + 1) * phi)
            assert hyp_largek_neg_estimate(k, -0.5, x) == pytest.approx(closed, rel=1e-12, abs=1e-12)
        checks = neg_checks(-0.5, x, range(1, 31))
        assert all(abs(c.ratio - 1) <= 1e-12 for c in checks if not c.node)

    def test_k40_x1(self):
        (c,) = neg_checks(0.0, 1.0, [40])
        assert abs(c.ratio - 1) <= 5 / 40

    @pytest.mark.parametrize("nu", [0.0, 1.0])
    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    def test_deviation_decreases(self, nu, x):
        devs = [median_deviation(neg_checks(nu, x, [k])) for k in (20, 40, 80, 160)]
        devs = [d for d in devs if not math.isnan(d)]
        assert all(b < a for a, b in zip(devs, devs[1:]))

    def test_nodes_flagged(self):
        # k=100 at nu=0, x=0.5 sits near a zero of the oscillatory factor
        (c,) = neg_checks(0.0, 0.5, [100])
        assert c.node

    def test_large_k_finite(self):
        assert math.isfinite(hyp_largek_neg_estimate(160, 1.0, 2.0))

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp_largek_neg_estimate(0, 0.0, 1.0)


class TestPositive:
    def test_k50(self):
        (c,) = pos_checks(0.0, 0.5, [50])
        assert abs(c.ratio - 1) <= 5 / 50

    def test_half_order_positive(self):
        assert all(hyp_largek_pos_estimate(k, -0.5, 0.4) > 0 for k in range(1, 50))

    def test_rate_halves(self):
        devs = [abs(pos_checks(1.0, 0.3, [k])[0].ratio - 1) for k in (25, 50, 100)]
        for a, b in zip(devs, devs[1:]):
            assert b / a == pytest.approx(0.5, abs=0.1)

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp_largek_pos_estimate(10, 0.0, 1.0)


class TestRemainder:
    def test_real_axis_point(self):
        (c,) = remainder_bound_profile(10, 0.0, 1.0, [0.0])
        assert math.isfinite(c.ratio) and c.ratio > 0
        assert c.exact == pytest.approx(abs(exact_terminating_2f1(10, 0.5, 0.0, -1.0)), rel=1e-12)

    def test_modulus_even_in_t(self):
        left = remainder_bound_profile(6, 0.5, 0.8, [-7.5])[0].exact
        right = remainder_bound_profile(6, 0.5, 0.8, [7.5])[0].exact
        assert left == pytest.approx(right, rel=1e-12)

    def test_constant_stable_under_grid_doubling(self):
        g1 = [0.5 * i for i in range(41)]
        g2 = [0.5 * i for i in range(81)]
        k1 = fitted_constant(remainder_bound_profile(10, 0.0, 1.0, g1))
        k2 = fitted_constant(remainder_bound_profile(10, 0.0, 1.0, g2))
        assert abs(k2 / k1 - 1) <= 0.2

    def test_literal_decay_only_bounds_negative_t(self):
        neg = [-0.5 * i for i in range(81)]
        pos = [0.5 * i for i in range(41)]
        k_neg = fitted_constant(remainder_bound_profile(10, 0.0, 1.0, neg, envelope="literal"))
        k_pos = fitted_constant(remainder_bound_profile(10, 0.0, 1.0, pos, envelope="literal"))
        assert k_neg < 1.0
        assert k_pos > 1e6
