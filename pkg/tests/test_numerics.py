import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sp

from eisenqe.errors import (
    AccuracyError,
    DivergentParametersError,
    NumericDomainError,
    OscillationBudgetError,
    PoleError,
    QuadratureError,
)
from eisenqe.numerics import (
    LogComplex,
    QuadratureSpec,
    SpectralPoint,
    bessel_k,
    bessel_k_log,
    bessel_k_scaled,
    bessel_moment_closed_form,
    bessel_moment_quadrature,
    integrate_1d,
    integrate_2d,
    log_gamma,
    log_xi_complex,
    sigma_power,
    sigma_table,
    xi,
    zeta,
    zeta_with_bound,
)
from eisenqe.numerics.special import (
    STIRLING_SWITCH,
    _log_gamma_lanczos,
    _log_gamma_stirling,
    factorize,
    log_gamma_complex,
    ramanujan_lhs,
    ramanujan_rhs,
    stirling_modulus_log,
)
from eisenqe.domain import JordanRegion, fundamental_domain

mpmath.mp.dps = 30

finite = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)


# --------------------------------------------------------------------------
# LogComplex


class TestLogComplex:
    @given(st.floats(-299, 299), st.floats(-3.14159, 3.14159))
    def test_round_trip(self, lm, ph):
        v = LogComplex(lm, ph)
        w = LogComplex.from_complex(v.to_complex())
        assert abs(w.log_mag - v.log_mag) <= 1e-14 * max(1.0, abs(v.log_mag))
        assert abs(math.remainder(w.phase - v.phase, 2 * math.pi)) <= 1e-14

    @given(finite, finite)
    def test_from_complex(self, re, im):
        z = complex(re, im)
        v = LogComplex.from_complex(z)
        if z == 0:
            assert v.is_zero()
        else:
            assert abs(v.to_complex() - z) <= 1e-15 * (1 + abs(v.log_mag)) * abs(z)

    @given(st.floats(-600, 600), st.floats(-20, 20))
    def test_phase_normalized(self, lm, ph):
        v = LogComplex(lm, ph)
        assert -math.pi < v.phase <= math.pi

    def test_zero(self):
        v = LogComplex.from_complex(0)
        assert v.log_mag == -math.inf and v.phase == 0.0
        assert v.to_complex() == 0

    def test_phase_minus_pi_maps_to_pi(self):
        assert LogComplex(0.0, -math.pi).phase == pytest.approx(math.pi)

    def test_arithmetic_matches_complex(self):
        a, b = complex(3, -2), complex(-0.5, 7)
        A, B = LogComplex.from_complex(a), LogComplex.from_complex(b)
        assert (A * B).to_complex() == pytest.approx(a * b, rel=1e-14)
        assert (A / B).to_complex() == pytest.approx(a / b, rel=1e-14)
        assert (A + B).to_complex() == pytest.approx(a + b, rel=1e-14)

    def test_extreme_magnitudes_survive(self):
        tiny = LogComplex(-1000.0, 0.3)
        huge = LogComplex(1000.0, -0.3)
        prod = tiny * huge
        assert prod.log_mag == pytest.approx(0.0, abs=1e-12)
        assert prod.phase == pytest.approx(0.0, abs=1e-15)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            LogComplex(float("nan"), 0.0)

    def test_spectral_point(self):
        p = SpectralPoint(0.5, 14.0)
        assert complex(p) == complex(0.5, 14.0)
        with pytest.raises(ValueError):
            SpectralPoint(float("inf"), 0.0)


# --------------------------------------------------------------------------
# Gamma


class TestGamma:
    def test_integer(self):
        v = log_gamma(5)
        assert v.log_mag == pytest.approx(math.log(24), rel=1e-14)
        assert v.phase == 0.0

    def test_half(self):
        v = log_gamma(0.5)
        assert v.log_mag == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
        assert v.phase == 0.0

    def test_stirling_height_50(self):
        v = log_gamma(complex(0.5, 50))
        ref = 0.5 * math.log(2 * math.pi) - 25 * math.pi
        assert abs(math.exp(v.log_mag - ref) - 1) < 0.02

    @pytest.mark.parametrize("n", [0, -1, -7])
    def test_poles(self, n):
        with pytest.raises(PoleError):
            log_gamma(n)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(-2.9, 3.0), st.floats(-300, 300))
    def test_against_mpmath(self, sigma, t):
        s = complex(sigma, t)
        if abs(s - round(sigma)) < 1e-3 and round(sigma) <= 0:
            return
        ref = complex(mpmath.loggamma(mpmath.mpc(sigma, t)))
        got = log_gamma_complex(s)
        assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref.real))
        d = math.remainder(got.imag - ref.imag, 2 * math.pi)
        assert abs(d) <= 1e-11 * max(1.0, abs(ref.imag))

    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.7, 5.0])
    def test_lanczos_stirling_seam(self, sigma):
        z = complex(sigma, STIRLING_SWITCH)
        assert abs(_log_gamma_lanczos(z) - _log_gamma_stirling(z)) < 1e-12

    @pytest.mark.parametrize("t", [10.0, 40.0, 200.0, 500.0])
    @pytest.mark.parametrize("sigma", [-2.0, 0.5, 3.0])
    def test_stirling_modulus_ratio(self, sigma, t):
        ratio = math.exp(log_gamma(complex(sigma, t)).log_mag - stirling_modulus_log(complex(sigma, t)))
        # relative deviation is O(1/|t|)
        assert abs(ratio - 1) < 2.0 / t


# --------------------------------------------------------------------------
# zeta and xi


class TestZeta:
    def test_two(self):
        assert zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)

    def test_zero(self):
        assert zeta(0) == pytest.approx(-0.5, abs=1e-15)

    def test_trivial_zero(self):
        assert zeta(-2) == 0

    def test_first_zero(self):
        assert abs(zeta(complex(0.5, 14.134725141734693))) < 1e-6

    def test_pole(self):
        with pytest.raises(PoleError):
            zeta(1)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            zeta(2, tol=0)

    def test_uncertifiable_tol(self, monkeypatch):
        import eisenqe.numerics.special as special

        monkeypatch.setattr(special, "ZETA_MAX_TERMS", 20)
        with pytest.raises(AccuracyError):
            zeta(complex(0.5, 500), tol=1e-15)

    def test_near_zero_from_left(self):
        assert zeta(complex(-1e-200, 0.0)) == pytest.approx(-0.5, abs=1e-15)
        assert zeta(complex(-3.0, 0.0)) == pytest.approx(1 / 120, rel=1e-13)

    def test_bound_reported(self):
        value, bound = zeta_with_bound(complex(0.5, 30))
        assert 0 <= bound <= 1e-15 * max(1.0, abs(value)) + 1e-15

    @settings(max_examples=60, deadline=None)
    @given(st.floats(-3.0, 4.0), st.floats(-300, 300))
    def test_against_mpmath(self, sigma, t):
        s = complex(sigma, t)
        if abs(s - 1) < 1e-3:
            return
        ref = complex(mpmath.zeta(mpmath.mpc(sigma, t)))
        assert abs(zeta(s) - ref) <= 1e-12 * max(1.0, abs(ref))


class TestXi:
    def test_two(self):
        assert xi(2).to_complex() == pytest.approx(math.pi / 6, rel=1e-14)

    def test_conjugate_pair(self):
        a = xi(complex(0.5, 30)).to_complex()
        b = xi(complex(0.5, -30)).to_complex()
        assert a == pytest.approx(b.conjugate(), rel=1e-12)
        assert abs(a) == pytest.approx(abs(b), rel=1e-14)

    def test_reflection_example(self):
        a = xi(complex(0.3, 7), reflect=False)
        b = xi(complex(0.7, -7), reflect=False)
        assert a.isclose(b, rel_tol=1e-10)

    @pytest.mark.parametrize("s", [0, 1])
    def test_poles(self, s):
        with pytest.raises(PoleError):
            xi(s)

    def test_symmetry_random(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            s = complex(rng.uniform(-2, 3), rng.uniform(-100, 100))
            d = log_xi_complex(s, reflect=False) - log_xi_complex(1 - s, reflect=False)
            assert abs(complex(d.real, math.remainder(d.imag, 2 * math.pi))) < 1e-12

    def test_critical_line_real(self):
        # pi^{-s/2} Gamma(s/2) zeta(s) is real on the critical line
        for t in (14.0, 33.3, 77.0):
            v = xi(complex(0.5, t)).to_complex()
            assert abs(v.imag) <= 1e-12 * abs(v)


# --------------------------------------------------------------------------
# K-Bessel


class TestBessel:
    def test_half_order_closed_form(self):
        assert bessel_k(0.5, 3.0) == pytest.approx(math.sqrt(math.pi / 6) * math.exp(-3), rel=1e-13)

    def test_order_zero(self):
        assert bessel_k(0, 1.0) == pytest.approx(0.42102443824070834, rel=1e-13)

    @pytest.mark.parametrize("nu", [complex(0.3, 0.0), complex(0.0, 5.0), complex(0.25, 40.0), complex(-0.4, 120.0)])
    @pytest.mark.parametrize("u", [0.05, 1.0, 30.0, 150.0])
    def test_against_mpmath(self, nu, u):
        ref = mpmath.besselk(mpmath.mpc(nu.real, nu.imag), u)
        got = bessel_k_scaled(nu, u)
        ref_log = complex(mpmath.log(ref))
        assert abs(got.log_mag - ref_log.real) < 1e-11 * max(1.0, abs(ref_log.real))
        if abs(ref) > 0:
            assert abs(math.remainder(got.phase - ref_log.imag, 2 * math.pi)) < 1e-10

    def test_scipy_real_order(self):
        u = np.linspace(0.1, 50, 40)
        got = np.exp(bessel_k_log(1.3, u)).real
        np.testing.assert_allclose(got, sp.kv(1.3, u), rtol=1e-12)

    def test_large_imag_order_no_underflow(self):
        v = bessel_k_scaled(complex(0.2, 1000.0), 50.0)
        assert math.isfinite(v.log_mag)
        assert v.log_mag == pytest.approx(-math.pi * 1000 / 2, rel=0.02)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-1, 1), st.floats(-200, 200), st.floats(0.01, 300))
    def test_conjugation_symmetry(self, a, b, u):
        k1 = bessel_k_scaled(complex(a, b), u)
        k2 = bessel_k_scaled(complex(a, -b), u)
        assert abs(k1.log_mag - k2.log_mag) < 1e-12 * max(1, abs(k1.log_mag))
        assert abs(math.remainder(k1.phase + k2.phase, 2 * math.pi)) < 1e-12 * max(1, abs(k1.log_mag))

    def test_order_parity(self):
        a = bessel_k_scaled(complex(0.3, 9.0), 2.0)
        b = bessel_k_scaled(complex(-0.3, -9.0), 2.0)
        assert a.isclose(b, rel_tol=1e-12)

    def test_nonpositive_argument(self):
        with pytest.raises(NumericDomainError):
            bessel_k_scaled(0.5, 0.0)
        with pytest.raises(NumericDomainError):
            bessel_k_log(0.5, np.array([1.0, -1.0]))

    def test_oscillation_budget(self):
        with pytest.raises(OscillationBudgetError):
            bessel_k_scaled(complex(0, 1600), 1.0)
        v = bessel_k_scaled(complex(0, 1600), 1.0, max_imag_order=2000)
        assert math.isfinite(v.log_mag)

    def test_moment_example(self):
        mu = complex(0.1, 5.0)
        lhs, err = bessel_moment_quadrature(1.4, mu, mu.conjugate())
        rhs = bessel_moment_closed_form(1.4, mu, mu.conjugate())
        assert abs(lhs - rhs) < 1e-6 * abs(rhs)
        assert err >= 0

    def test_moment_mpmath(self):
        s, mu, nu = complex(2.0, 1.0), complex(0.2, 3.0), complex(-0.1, -2.5)
        f = lambda y: y ** (s - 1) * mpmath.besselk(mu, y) * mpmath.besselk(nu, y)
        ref = complex(mpmath.quad(f, [0, 1, 5, 20, mpmath.inf]))
        assert bessel_moment_closed_form(s, mu, nu) == pytest.approx(ref, rel=1e-10)

    def test_moment_divergent(self):
        with pytest.raises(NumericDomainError):
            bessel_moment_quadrature(0.5, 0.3, 0.3)


# --------------------------------------------------------------------------
# divisor sums and the Ramanujan identity


class TestDivisors:
    @pytest.mark.parametrize("n,c,expected", [(6, 0, 4), (6, 1, 12), (4, -2, 21 / 16), (1, 3.5, 1), (12, 2, 210)])
    def test_examples(self, n, c, expected):
        assert sigma_power(n, c) == pytest.approx(expected, rel=1e-15)

    def test_factorize(self):
        assert factorize(360) == ((2, 3), (3, 2), (5, 1))
        assert factorize(1) == ()

    @settings(max_examples=50)
    @given(st.integers(1, 5000), st.floats(-2, 2), st.floats(-10, 10))
    def test_brute_force(self, n, a, b):
        c = complex(a, b)
        ref = sum(d**c for d in range(1, n + 1) if n % d == 0)
        assert sigma_power(n, c) == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_table_matches_scalar(self):
        c = complex(-0.3, 4.0)
        tab = sigma_table(200, c)
        for n in (1, 2, 17, 60, 199, 200):
            assert tab[n - 1] == pytest.approx(sigma_power(n, c), rel=1e-13)
        assert not tab.flags.writeable

    def test_invalid(self):
        with pytest.raises(ValueError):
            sigma_power(0, 1)

    def test_ramanujan_trivial_specialization(self):
        assert ramanujan_rhs(3, 0, 0) == pytest.approx(zeta(3) ** 4 / zeta(6), rel=1e-14)
        assert ramanujan_lhs(3, 0, 0, 20000) == pytest.approx(ramanujan_rhs(3, 0, 0), rel=1e-6)

    def test_ramanujan_real(self):
        assert ramanujan_lhs(3, -0.4, -0.4, 10_000) == pytest.approx(ramanujan_rhs(3, -0.4, -0.4), rel=1e-3)

    def test_ramanujan_conjugate_pair(self):
        a = complex(-0.5, 1.0)
        s = complex(4.0, 2.0)
        lhs, rhs = ramanujan_lhs(s, a, a.conjugate(), 10_000), ramanujan_rhs(s, a, a.conjugate())
        assert abs(lhs - rhs) < 1e-3 * abs(rhs)

    def test_ramanujan_converges(self):
        rhs = ramanujan_rhs(2.5, -0.2, -0.2)
        errs = [abs(ramanujan_lhs(2.5, -0.2, -0.2, n) - rhs) for n in (100, 1000, 10000)]
        assert errs[0] > errs[1] > errs[2]
        # tail ~ N^{1 - Re s}: one decade of N gains about 1.5 decades
        assert errs[1] / errs[2] > 10

    def test_ramanujan_divergent(self):
        with pytest.raises(DivergentParametersError):
            ramanujan_lhs(1.5, 0.5, 0.5, 100)


# --------------------------------------------------------------------------
# quadrature


class TestQuadrature:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(rel_tol=0)
        with pytest.raises(ValueError):
            QuadratureSpec(max_depth=0)

    def test_exp_semi_infinite(self):
        v, err = integrate_1d(lambda y: np.exp(-y), (0.0, math.inf))
        assert v == pytest.approx(1.0, rel=1e-12)
        assert err <= 1e-10

    def test_endpoint_singularity(self):
        v, _ = integrate_1d(lambda y: y**-0.5, (0.0, 1.0))
        assert v == pytest.approx(2.0, rel=1e-9)

    def test_mellin_weight_value(self):
        v, _ = integrate_1d(lambda y: np.exp(-y - 1 / y) / y, (0.0, math.inf))
        assert v == pytest.approx(2 * bessel_k(0, 2.0), rel=1e-10)
        assert v == pytest.approx(0.2277877454990668, rel=1e-12)

    def test_oscillatory_1d(self):
        v, _ = integrate_1d(lambda y: np.cos(50 * y), (0.0, 2.0))
        assert v == pytest.approx(math.sin(100) / 50, abs=1e-12)

    def test_deterministic(self):
        f = lambda y: np.exp(-y) * np.sin(3 * y)
        assert integrate_1d(f, (0.0, math.inf)) == integrate_1d(f, (0.0, math.inf))

    def test_tolerance_not_met(self):
        with pytest.raises(QuadratureError):
            integrate_1d(lambda y: np.sin(1 / y), (1e-6, 1.0), QuadratureSpec(1e-14, 1e-16, max_depth=3))

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            integrate_1d(lambda y: y, (-math.inf, 0.0))

    def test_2d_unit_box(self):
        region = JordanRegion(((0.0, 1.0, 1.0, 2.0),))
        v, _ = integrate_2d(lambda xs, y: np.ones_like(xs), region, "hyperbolic")
        assert v == pytest.approx(0.5, rel=1e-12)

    def test_2d_full_period(self):
        region = JordanRegion(((0.0, 1.0, 1.0, 2.0),))
        v, _ = integrate_2d(lambda xs, y: np.cos(2 * np.pi * xs), region, "hyperbolic")
        assert abs(v) < 1e-12

    def test_2d_euclidean(self):
        region = JordanRegion(((0.0, 2.0, 1.0, 3.0),))
        v, _ = integrate_2d(lambda xs, y: xs * y + 0 * xs, region, "euclidean")
        assert v == pytest.approx(2.0 * 4.0, rel=1e-12)

    def test_2d_fundamental_domain(self):
        v, _ = integrate_2d(lambda xs, y: np.ones_like(xs), fundamental_domain(), "hyperbolic")
        assert v == pytest.approx(math.pi / 3, rel=1e-10)

    def test_2d_high_mode(self):
        region = JordanRegion(((0.0, 0.3, 1.0, 2.0),), max_fourier_mode_hint=60)
        v, _ = integrate_2d(lambda xs, y: np.cos(2 * np.pi * 60 * xs), region, "hyperbolic",
                            x_modes=60)
        assert v == pytest.approx(math.sin(2 * np.pi * 60 * 0.3) / (2 * np.pi * 60) * 0.5, abs=1e-11)

    def test_2d_bad_weight(self):
        with pytest.raises(ValueError):
            integrate_2d(lambda xs, y: xs, JordanRegion(((0.0, 1.0, 1.0, 2.0),)), "flat")
