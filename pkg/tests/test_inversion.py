"""Tests for the principal-branch inversion, the characteristics oracle,
the contour-integral route, the cumulant generator, and the thermodynamic
relations.

Frozen inversion references were obtained by 40-digit root finding on the
multiprecision closed forms.
"""

import math

import pytest

from rgflow import (
    BlowUpError,
    ContainmentError,
    DomainError,
    Flavor,
    FlowParams,
    InversionMethod,
    characteristic_p_closed,
    characteristics_oracle,
    eval_v,
    invert_contour,
    mu_of_beta,
    pbar_asymptotic_critical,
    pbar_asymptotic_normal,
    phat_of_beta,
    solve_pbar,
    spectral_edge,
    turning_point,
    u_of_x,
)


CRIT = FlowParams(4.0, Flavor.CRITICAL, 2.0)
NORM = FlowParams(2.0, Flavor.NORMAL, 2.0)


class TestCharacteristics:
    def test_rk4_matches_closed_forms(self):
        for pr, p0 in [(CRIT, -0.5), (NORM, 0.8)]:
            state = characteristics_oracle(pr, p0, pr.t, 4000)
            p_exact = characteristic_p_closed(pr, p0, pr.t)
            assert state.p == pytest.approx(p_exact, abs=1e-12)
            assert state.V == pytest.approx(eval_v(pr, p_exact), rel=1e-10)

    def test_fourth_order_convergence(self):
        pr = FlowParams(4.0, Flavor.CRITICAL, 1.5)
        p_exact = characteristic_p_closed(pr, -0.5, 1.5)
        v_exact = eval_v(pr, p_exact)
        e1 = abs(characteristics_oracle(pr, -0.5, 1.5, 1000).V - v_exact)
        e2 = abs(characteristics_oracle(pr, -0.5, 1.5, 2000).V - v_exact)
        assert e1 / e2 == pytest.approx(16.0, rel=0.3)

    def test_blow_up_detected(self):
        pr = FlowParams(4.0, Flavor.CRITICAL, 0.0)
        with pytest.raises(BlowUpError):
            characteristics_oracle(pr, 0.5, 10.0, 1000)

    def test_preconditions(self):
        with pytest.raises(DomainError):
            characteristics_oracle(CRIT, -0.5, 1.0, 50)
        with pytest.raises(DomainError):
            characteristics_oracle(CRIT, 0.0, 1.0, 1000)


class TestTurningPoint:
    def test_t0_value(self):
        # v0'(p) = 0 at p = -beta for the t=0 data
        pr = FlowParams(4.0, Flavor.CRITICAL, 0.0)
        assert turning_point(pr) == pytest.approx(-4.0, abs=1e-12)
        assert spectral_edge(pr) == pytest.approx(1.0 / 16.0, abs=1e-13)

    def test_frozen_t2(self):
        assert turning_point(CRIT) == pytest.approx(-1.8028948504497325,
                                                    abs=1e-12)
        assert spectral_edge(CRIT) == pytest.approx(0.597343918986841,
                                                    abs=1e-12)


class TestSolvePbar:
    def test_frozen_real_root(self):
        r = solve_pbar(CRIT, 0.3)
        assert r.pbar == pytest.approx(-1.0400393253223808, abs=1e-12)
        assert r.method is InversionMethod.BISECTION

    def test_frozen_normal_root(self):
        r = solve_pbar(NORM, 0.0)
        assert r.pbar == pytest.approx(-2.4023619030342444, abs=1e-11)

    def test_roundtrip_real(self):
        for pr in (CRIT, NORM):
            for x in (-0.1, 0.5, 4.0):
                pb = solve_pbar(pr, x).pbar
                assert eval_v(pr, pb) == pytest.approx(x, abs=1e-9)

    def test_roundtrip_complex(self):
        for pr in (CRIT, NORM):
            for x in (0.3 + 0.4j, -0.2 + 1.0j, 2.0 - 0.5j):
                r = solve_pbar(pr, x)
                assert r.method is InversionMethod.NEWTON
                assert abs(eval_v(pr, r.pbar) - x) < 1e-9 * max(1.0, abs(x))

    def test_pick_property(self):
        for x in (0.1 + 0.1j, -0.3 + 0.05j, 1.0 + 2.0j):
            assert solve_pbar(CRIT, x).pbar.imag > 0.0
            assert solve_pbar(CRIT, x.conjugate()).pbar.imag < 0.0

    def test_invariant_point(self):
        for t in (0.0, 1.0, 20.0):
            pr = FlowParams(4.0, Flavor.CRITICAL, t)
            assert solve_pbar(pr, 0.5).pbar == pytest.approx(-1.0, abs=1e-10)

    def test_below_edge_rejected(self):
        with pytest.raises(DomainError):
            solve_pbar(CRIT, -2.0 * spectral_edge(CRIT))


class TestContour:
    def test_matches_newton(self):
        z = 0.3 + 0.2j
        pb = solve_pbar(NORM, z).pbar
        assert invert_contour(NORM, z, pb, 0.2) == pytest.approx(pb, abs=1e-9)

    def test_winding_guard(self):
        with pytest.raises(ContainmentError):
            invert_contour(NORM, 100.0 + 50.0j, 0.3 + 0.2j, 0.1)

    def test_branch_cut_guard(self):
        # the cut of the normal flavor sits at real eta >= 1/(1 - e^{-2t})
        cut = 1.0 / -math.expm1(-4.0)
        with pytest.raises(DomainError):
            invert_contour(NORM, 0.3 + 0.2j, cut + 0.05, 0.2)


class TestCumulantGenerator:
    def test_zero_at_origin(self):
        assert u_of_x(CRIT, 0.0) == 0.0

    def test_frozen_value(self):
        pr = FlowParams(4.0, Flavor.CRITICAL, 1.0)
        assert u_of_x(pr, 0.3) == pytest.approx(-0.34029713733848168,
                                                abs=1e-10)

    def test_t0_matches_closed_form(self):
        from rgflow import u0_eval
        pr = FlowParams(4.0, Flavor.CRITICAL, 0.0)
        for x in (0.1, -0.05, 0.3 + 0.2j):
            assert u_of_x(pr, x) == pytest.approx(u0_eval(x, 4.0), abs=1e-12)

    def test_derivative_is_pbar(self):
        h = 1e-6
        x = 0.4
        num = (u_of_x(CRIT, x + h) - u_of_x(CRIT, x - h)) / (2.0 * h)
        assert num == pytest.approx(solve_pbar(CRIT, x).pbar, abs=1e-8)

    def test_path_through_edge_rejected(self):
        with pytest.raises(DomainError):
            u_of_x(CRIT, -1.0)


class TestThermodynamics:
    def test_frozen_beta2(self):
        assert mu_of_beta(2.0) == pytest.approx(-0.19897627365795828,
                                                abs=1e-12)
        assert phat_of_beta(2.0) == pytest.approx(-2.512862417252339,
                                                  abs=1e-11)

    def test_identity(self):
        for beta in (0.5, 1.0, 2.0, 3.0, 3.9):
            assert phat_of_beta(beta) == pytest.approx(
                1.0 / (2.0 * mu_of_beta(beta)), abs=1e-10)

    def test_beta_zero_plateau(self):
        assert phat_of_beta(0.0) == 0.0

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            mu_of_beta(4.0)
        with pytest.raises(DomainError):
            phat_of_beta(-1.0)


class TestAsymptotics:
    def test_critical_form(self):
        t = 40.0
        pr = FlowParams(4.0, Flavor.CRITICAL, t)
        pb = solve_pbar(pr, 0.25).pbar.real
        # the two-term form is accurate to o(1/t)
        assert abs(pb - pbar_asymptotic_critical(t, 0.25)) < 0.05 / t

    def test_normal_form(self):
        beta, t = 2.0, 6.0
        pr = FlowParams(beta, Flavor.NORMAL, t)
        pb = solve_pbar(pr, 0.0).pbar.real
        # remainder is O(e^{-4t})
        assert abs(pb - pbar_asymptotic_normal(t, beta)) < 100.0 * math.exp(
            -4.0 * t)

    def test_normal_correction_coefficient(self):
        # pbar = phat (1 + phat e^{-2t}) + O(e^{-4t}): the measured
        # first-order coefficient must converge to phat
        beta = 3.0
        phat = phat_of_beta(beta)
        for t in (5.0, 6.0):
            pr = FlowParams(beta, Flavor.NORMAL, t)
            pb = solve_pbar(pr, 0.0).pbar.real
            coeff = (pb / phat - 1.0) * math.exp(2.0 * t)
            assert coeff == pytest.approx(phat, rel=0.05)

    def test_domain_guards(self):
        with pytest.raises(DomainError):
            pbar_asymptotic_critical(0.5, 0.0)
        with pytest.raises(DomainError):
            pbar_asymptotic_normal(5.0, 4.0)
