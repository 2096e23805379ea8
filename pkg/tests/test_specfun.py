import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import example, given, settings, strategies as st

from besselsum.core import DomainError, PoleError
from besselsum.specfun import (
    BESSEL_SWITCH,
    bessel_i_norm,
    bessel_j_norm,
    gamma,
    hermite,
    hyp2f1,
    hyp2f1_terms,
    kummer_1f1,
    rgamma,
    signed_log_gamma,
    zeta,
)


class TestGamma:
    @given(st.floats(min_value=0.01, max_value=50.0))
    def test_recurrence(self, s):
        assert gamma(s + 1.0) == pytest.approx(s * gamma(s), rel=1e-12)

    def test_poles(self):
        with pytest.raises(PoleError):
            gamma(-3.0)
        assert rgamma(0.0) == 0.0 and rgamma(-2.0) == 0.0

    def test_negative_argument_sign(self):
        for s in (-0.5, -1.5, -2.5, -3.3):
            g = signed_log_gamma(s)
            assert g.to_real() == pytest.approx(math.gamma(s), rel=1e-13)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            gamma(200.0)
        assert rgamma(200.0) == pytest.approx(math.exp(-math.lgamma(200.0)))


class TestZeta:
    # reference values from mpmath at 30 digits
    @pytest.mark.parametrize(
        "s, ref",
        [(-1.5, -0.02548520188983303595), (3.7, 1.1062882414646792443), (0.0, -0.5), (2.0, math.pi ** 2 / 6)],
    )
    def test_values(self, s, ref):
        assert zeta(s) == pytest.approx(ref, rel=1e-14)

    @pytest.mark.parametrize("s", [-0.5, -1.5, -3.0])
    def test_functional_equation(self, s):
        rhs = 2 ** s * math.pi ** (s - 1) * zeta(1 - s) * math.gamma(1 - s) * math.sin(math.pi * s / 2)
        assert zeta(s) == pytest.approx(rhs, rel=1e-13)

    def test_trivial_zeros_exact(self):
        assert zeta(-2.0) == 0.0 and zeta(-10.0) == 0.0

    @given(st.floats(min_value=1.05, max_value=120.0))
    @settings(max_examples=40)
    def test_against_mpmath(self, s):
        assert zeta(s) == pytest.approx(float(mp.zeta(s)), rel=5e-15)

    def test_pole(self):
        with pytest.raises(PoleError):
            zeta(1.0)


class TestHyp2F1:
    def test_frozen_value(self):
        assert hyp2f1(0.25, 0.75, 1.5, -0.81) == pytest.approx(0.92344283975230703468, rel=1e-14)

    @given(
        st.floats(min_value=-0.9, max_value=-0.01),
        st.floats(min_value=0.1, max_value=1.75),
        st.floats(min_value=0.5, max_value=4.0),
    )
    def test_pfaff_invariance(self, z, alpha, c):
        # the (alpha, alpha + 1/2) pairs used by the expansions
        beta = alpha + 0.5
        direct = hyp2f1(alpha, beta, c, z, route="direct")
        pfaff = hyp2f1(alpha, beta, c, z, route="pfaff")
        assert pfaff == pytest.approx(direct, rel=1e-11)

    @given(
        st.floats(min_value=-0.9, max_value=-0.01),
        st.floats(min_value=0.1, max_value=3.0),
        st.floats(min_value=0.1, max_value=3.0),
        st.floats(min_value=0.5, max_value=4.0),
    )
    def test_pfaff_invariance_relative_to_conditioning(self, z, alpha, beta, c):
        direct = hyp2f1(alpha, beta, c, z, route="direct")
        pfaff = hyp2f1(alpha, beta, c, z, route="pfaff")
        scale = math.fsum(abs(t) for t in hyp2f1_terms(alpha, beta, c, z, 2000))
        assert abs(pfaff - direct) <= 1e-11 * max(abs(direct), scale * 1e-3)

    @pytest.mark.parametrize("k", [0, 1, 5, 12])
    @pytest.mark.parametrize("z", [-2.0, -0.3, 0.7])
    def test_terminating_equals_horner(self, k, z):
        beta, c = -k - 0.5, 1.3
        coeffs = hyp2f1_terms(-k, beta, c, 1.0, k)
        horner = 0.0
        for coef in reversed(coeffs):
            horner = horner * z + coef
        assert hyp2f1(-k, beta, c, z) == pytest.approx(horner, rel=1e-13, abs=1e-14)

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.0])
    def test_trig_identity(self, x):
        for k in range(21):
            lhs = hyp2f1(-k, -k - 0.5, 0.5, -x * x)
            rhs = (1 + x * x) ** (k + 0.5) * math.cos((2 * k + 1) * math.atan(x))
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10 * (1 + x * x) ** (k + 0.5))

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp2f1(0.5, 0.5, 1.0, 1.0)
        with pytest.raises(PoleError):
            hyp2f1(0.5, 0.5, -2.0, 0.3)


class TestKummerHermite:
    @pytest.mark.parametrize("chi", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("r", range(7))
    def test_identity(self, r, chi):
        lhs = kummer_1f1(2 * r + 0.5, 0.5, -chi)
        h = hermite(4 * r, math.sqrt(chi)).to_real()
        rhs = math.exp(-chi) * math.factorial(2 * r) / math.factorial(4 * r) * h
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_hermite_small(self):
        assert hermite(3, 0.7).to_real() == pytest.approx(8 * 0.7 ** 3 - 12 * 0.7)


class TestBessel:
    def test_frozen_values(self):
        assert bessel_j_norm(0.3, 30.0) == pytest.approx(-0.057741218018675666416, rel=1e-13)
        assert bessel_i_norm(1.2, 40.0, scaled=True) == pytest.approx(0.001706481275726867373, rel=1e-13)

    def test_origin(self):
        assert bessel_j_norm(0.5, 0.0) == pytest.approx(1 / math.gamma(1.5))
        assert bessel_i_norm(2.0, 0.0) == pytest.approx(0.5)

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.3])
    def test_branch_continuity(self, nu):
        z = np.linspace(BESSEL_SWITCH - 1.0, BESSEL_SWITCH + 1.0, 41)
        a = bessel_j_norm(nu, z, branch="series")
        b = bessel_j_norm(nu, z, branch="asymptotic")
        assert np.max(np.abs(a - b)) <= 1e-10

    @given(st.floats(min_value=-0.45, max_value=3.0), st.floats(min_value=0.0, max_value=200.0))
    @example(1.0, 5e-324)
    @settings(max_examples=60, deadline=None)
    def test_j_against_mpmath(self, nu, z):
        ref = mp.besselj(nu, z) / (mp.mpf(z) / 2) ** nu if z > 0 else 1 / mp.gamma(1 + nu)
        zz = max(z, 1.0)
        envelope = max(1.0, float(mp.mpf(zz / 2) ** -nu * mp.sqrt(2 / (mp.pi * zz))))
        assert abs(bessel_j_norm(nu, z) - float(ref)) <= 5e-14 * envelope

    @given(st.floats(min_value=-0.45, max_value=3.0), st.floats(min_value=0.0, max_value=300.0))
    @example(1.0, 5e-324)
    @settings(max_examples=60, deadline=None)
    def test_i_scaled_against_mpmath(self, nu, z):
        ref = mp.besseli(nu, z) * mp.e ** (-z) / (mp.mpf(z) / 2) ** nu if z > 0 else 1 / mp.gamma(1 + nu)
        assert bessel_i_norm(nu, z, scaled=True) == pytest.approx(float(ref), rel=1e-13)

    def test_vectorized_matches_scalar(self):
        # backward recurrence starts from the largest z in a batch, so only ulp-level agreement
        z = np.array([0.0, 1.0, 5.0, 24.0, 30.0, 500.0])
        v = bessel_j_norm(0.7, z)
        assert np.allclose(v, [bessel_j_norm(0.7, float(t)) for t in z], rtol=1e-14, atol=0)
