"""Tests for the initial data: continued fractions, the limit derivative,
its antiderivative, and the spectral density.

Finite-N reference values come from a 40-digit Bessel-function evaluation
of theta_N'(x) = phi_{N/2}(i sqrt(beta x) N) / (2 N x).
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from rgflow import (
    BranchCutError,
    DomainError,
    bessel_ratio_cf,
    f0_stieltjes,
    rho_initial,
    theta_prime_n,
    u0_eval,
    u0_prime,
)


class TestBesselRatio:
    def test_small_argument(self):
        # phi_1(xi) ~ xi^2/2 - xi^4/16 for small xi
        assert bessel_ratio_cf(1.0, 0.01) == pytest.approx(
            5.000062501041685e-05, rel=1e-12)

    def test_against_scipy(self):
        from scipy.special import jv
        for nu, xi in [(2.0, 1.0), (5.0, 3.0), (25.0, 10.0)]:
            expected = xi * jv(nu, xi) / jv(nu - 1, xi)
            assert bessel_ratio_cf(nu, xi) == pytest.approx(expected,
                                                            rel=1e-12)

    def test_even_function(self):
        assert bessel_ratio_cf(3.0, 1.5) == pytest.approx(
            bessel_ratio_cf(3.0, -1.5), rel=1e-14)

    def test_worpitzky_guard(self):
        with pytest.raises(DomainError):
            bessel_ratio_cf(1.0, 5.0)
        # extended evaluation still agrees with the direct ratio
        from scipy.special import jv
        value = bessel_ratio_cf(1.0, 5.0, extended=True)
        assert value == pytest.approx(5.0 * jv(1, 5.0) / jv(0, 5.0),
                                      rel=1e-10)

    def test_order_guard(self):
        with pytest.raises(DomainError):
            bessel_ratio_cf(0.5, 1.0)


class TestThetaPrime:
    def test_value_at_zero(self):
        # exact: theta_N'(0) = -beta/2 for every N
        for n in (1, 10, 500):
            assert theta_prime_n(n, 0.0, 4.0) == -2.0

    def test_frozen_values(self):
        assert theta_prime_n(10, 0.01, 2.0).real == pytest.approx(
            -0.98379464774063469, rel=1e-12)
        assert theta_prime_n(50, -0.02, 4.0).real == pytest.approx(
            -2.1817595817579558, rel=1e-12)

    def test_convergence_domain_guard(self):
        with pytest.raises(DomainError):
            theta_prime_n(10, 0.5, 4.0)
        theta_prime_n(10, 0.5, 4.0, extended=True)  # still evaluates

    def test_pick_property(self):
        z = 0.01 + 0.02j
        assert theta_prime_n(50, z, 4.0).imag > 0.0

    def test_converges_to_limit(self):
        x = 0.03
        errs = [abs(theta_prime_n(n, x, 4.0) - u0_prime(x, 4.0))
                for n in (50, 100, 200)]
        assert errs[0] > errs[1] > errs[2]


class TestLimitDerivative:
    def test_value_at_zero(self):
        assert u0_prime(0.0, 4.0) == pytest.approx(-2.0)

    def test_closed_form(self):
        zeta, beta = 0.3, 2.0
        s = math.sqrt(1.0 + 4.0 * beta * zeta)
        assert u0_prime(zeta, beta) == pytest.approx(-beta / (1.0 + s),
                                                     rel=1e-15)

    def test_branch_cut_guard(self):
        with pytest.raises(BranchCutError):
            u0_prime(-0.5, 4.0)
        boundary = u0_prime(-0.5, 4.0, boundary=True)
        assert boundary.imag != 0.0

    def test_boundary_value_is_uhp_limit(self):
        lam = -0.5
        limit = u0_prime(lam + 1e-9j, 4.0)
        assert u0_prime(lam, 4.0, boundary=True) == pytest.approx(limit,
                                                                  abs=1e-4)

    def test_pick_property(self):
        for z in (0.1 + 0.1j, -2.0 + 0.5j, 3.0 + 2.0j):
            assert u0_prime(z, 4.0).imag > 0.0


class TestAntiderivative:
    def test_zero_at_origin(self):
        assert u0_eval(0.0, 4.0) == 0.0

    def test_frozen_real_value(self):
        # at beta=4, x=3/16 the square root is exactly 2
        assert u0_eval(3.0 / 16.0, 4.0) == pytest.approx(
            -0.2972674459459178, abs=1e-15)

    def test_frozen_complex_value(self):
        assert u0_eval(0.1 + 0.2j, 4.0) == pytest.approx(
            -0.21989643330953681 - 0.28695042587554908j, abs=1e-14)

    def test_matches_quadrature(self):
        beta = 3.0
        for x in (0.2, -0.05):
            ref, _ = quad(lambda s: u0_prime(s, beta), 0.0, x)
            assert u0_eval(x, beta) == pytest.approx(ref, abs=1e-10)


class TestDensity:
    def test_support(self):
        assert rho_initial(-0.2, 1.0) == 0.0
        assert rho_initial(-0.26, 1.0) > 0.0

    def test_unit_form(self):
        lam = -1.0
        expected = math.sqrt(-4.0 * lam - 1.0) / (4.0 * math.pi * (-lam))
        assert rho_initial(lam, 1.0) == pytest.approx(expected, rel=1e-15)

    def test_scaling(self):
        # density of x -> beta f0(beta x) is beta rho0(beta lam)
        assert rho_initial(-0.5, 2.0) == pytest.approx(
            2.0 * rho_initial(-1.0, 1.0), rel=1e-15)

    def test_first_inverse_moment(self):
        # the measure is infinite (rho0 ~ |lam|^{-1/2}) but its Stieltjes
        # transform at 0 is -1/2: int rho0(lam)/lam dlam = -1/2
        val, _ = quad(lambda lam: rho_initial(lam) / lam, -math.inf, -0.25,
                      limit=400)
        assert val == pytest.approx(-0.5, abs=1e-7)


class TestStieltjes:
    def test_value_at_zero(self):
        assert f0_stieltjes(0.0) == pytest.approx(-0.5, abs=1e-10)

    def test_frozen_complex_value(self):
        assert f0_stieltjes(-1.0 + 0.5j) == pytest.approx(
            -0.27168529756232956 + 0.31849585647482788j, abs=1e-10)

    def test_consistency_with_limit_derivative(self):
        # u0'(x) = beta f0(beta x)
        beta, x = 4.0, 0.05
        assert beta * f0_stieltjes(beta * x) == pytest.approx(
            u0_prime(x, beta), abs=1e-9)

    def test_support_guard(self):
        with pytest.raises(BranchCutError):
            f0_stieltjes(-0.3)


def test_imaginary_part_recovers_density():
    # rho0(lam) = (1/pi) lim Im f0(lam + i eta)
    lam = -0.8
    approx = f0_stieltjes(lam + 1e-7j).imag / math.pi
    assert approx == pytest.approx(rho_initial(lam, 1.0), abs=1e-4)
