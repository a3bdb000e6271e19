"""Tests for the closed-form flow solutions and their derivatives.

Reference values were frozen from a 40-digit multiprecision evaluation of
the closed forms (derivatives by central differences at step 1e-25).
"""

import math

import pytest

from rgflow import (
    BranchCutError,
    DomainError,
    Flavor,
    FlowParams,
    SingularityError,
    eval_dv,
    eval_dv_dt,
    eval_f,
    eval_g_critical,
    eval_g_normal,
    eval_v,
)


def params(beta, flavor, t):
    return FlowParams(beta, flavor, t)


class TestFrozenValues:
    def test_v_critical(self):
        p = params(3.0, Flavor.CRITICAL, 1.25)
        assert eval_v(p, -1.7) == pytest.approx(-1.4288481220708957, abs=1e-14)

    def test_dv_critical(self):
        p = params(3.0, Flavor.CRITICAL, 1.25)
        assert eval_dv(p, -1.7) == pytest.approx(-1.0696231615895475, abs=1e-14)

    def test_dvdt_critical(self):
        p = params(3.0, Flavor.CRITICAL, 1.25)
        assert eval_dv_dt(p, -1.7) == pytest.approx(-2.4026246269264066,
                                                    abs=1e-13)

    def test_v_normal(self):
        p = params(2.5, Flavor.NORMAL, 1.25)
        assert eval_v(p, -1.7) == pytest.approx(9.101616564024613, rel=1e-14)

    def test_dv_normal(self):
        p = params(2.5, Flavor.NORMAL, 1.25)
        assert eval_dv(p, -1.7) == pytest.approx(18.26911738009987, rel=1e-13)

    def test_dvdt_normal(self):
        p = params(2.5, Flavor.NORMAL, 1.25)
        assert eval_dv_dt(p, -1.7) == pytest.approx(39.911865557699576,
                                                    rel=1e-13)

    def test_v_complex(self):
        p = params(4.0, Flavor.CRITICAL, 1.5)
        value = eval_v(p, -0.8 + 0.6j)
        assert value == pytest.approx(-2.0246830280492447 + 0.97585860475756015j,
                                      abs=1e-13)


class TestSeriesRegion:
    """Near p = 0 the closed form cancels catastrophically; the cancelled
    Maclaurin path must agree with the multiprecision reference."""

    def test_critical_small_p(self):
        p = params(4.0, Flavor.CRITICAL, 0.7)
        assert eval_v(p, -1e-5) == pytest.approx(40551177450.280998, rel=1e-12)

    def test_normal_small_p(self):
        p = params(2.0, Flavor.NORMAL, 0.7)
        assert eval_v(p, -1e-5) == pytest.approx(82222411626.641724, rel=1e-12)

    def test_series_joins_closed_form(self):
        # the two evaluation paths must agree near the switch-over
        for flavor in Flavor:
            pr = params(3.0, flavor, 1.0)
            scale = math.expm1(2.0) if flavor is Flavor.CRITICAL \
                else -math.expm1(-2.0)
            for frac in (0.99, 1.01):
                eta = -1e-3 * frac / scale
                v_here = eval_v(pr, eta)
                # compare against a nearby point on the other side through
                # a first-order extrapolation
                eta2 = eta * 1.02
                v_there = eval_v(pr, eta2)
                dv = eval_dv(pr, eta)
                assert v_there - v_here == pytest.approx(
                    dv * (eta2 - eta), rel=5e-2)


class TestInitialCondition:
    @pytest.mark.parametrize("flavor", list(Flavor))
    @pytest.mark.parametrize("beta", [1.0, 2.5, 4.0])
    def test_reduces_to_initial_data(self, flavor, beta):
        pr = params(beta, flavor, 0.0)
        for p in (-3.5, -1.0, -0.2, -1e-4, 0.5):
            expected = 1.0 / (2.0 * p) + beta / (4.0 * p * p)
            assert eval_v(pr, p) == pytest.approx(expected, rel=1e-12)


class TestEvolutionEquations:
    def test_critical_pde(self):
        pr = params(4.0, Flavor.CRITICAL, 1.3)
        for p in (-2.5, -1.0, -0.4):
            r = (eval_dv_dt(pr, p)
                 - 2.0 * p * (1.0 + p) * eval_dv(pr, p)
                 + 1.0 - (6.0 + 4.0 * p) * eval_v(pr, p))
            assert abs(r) < 1e-10

    def test_normal_pde(self):
        pr = params(2.0, Flavor.NORMAL, 1.3)
        emt = math.exp(-2.6)
        for p in (-2.5, -1.0, -0.4):
            r = (eval_dv_dt(pr, p)
                 - 2.0 * p * p * emt * eval_dv(pr, p)
                 + emt - (4.0 + 4.0 * emt * p) * eval_v(pr, p))
            assert abs(r) < 1e-10


class TestLargeScale:
    """At 2t > 690 the critical flavor switches to a log-domain path."""

    def test_invariant_point_survives(self):
        pr = params(4.0, Flavor.CRITICAL, 400.0)
        assert eval_v(pr, -1.0) == pytest.approx(0.5, abs=1e-12)

    def test_pde_residual_at_large_t(self):
        pr = params(4.0, Flavor.CRITICAL, 400.0)
        for p in (-2.0, -0.7):
            r = (eval_dv_dt(pr, p)
                 - 2.0 * p * (1.0 + p) * eval_dv(pr, p)
                 + 1.0 - (6.0 + 4.0 * p) * eval_v(pr, p))
            assert abs(r) < 1e-9


class TestAuxiliaries:
    def test_f_nonnegative_with_zero_at_origin(self):
        assert eval_f(0.0) == 0.0
        for w in (-5.0, -0.5, 0.3, 0.9):
            assert eval_f(w) > 0.0

    def test_f_domain(self):
        with pytest.raises(DomainError):
            eval_f(1.0)

    def test_g_critical_value(self):
        # frozen: -((1+p)/p) ln(1 + p - p e^{2t}) at t=1, p=-2
        assert eval_g_critical(1.0, -2.0) == pytest.approx(
            -1.3115406301998319, abs=1e-14)

    def test_g_critical_limit_at_zero(self):
        assert eval_g_critical(1.0, 0.0) == pytest.approx(math.expm1(2.0))

    def test_g_normal_value(self):
        # frozen from the closed form at beta=4, t=1, p=-2
        assert eval_g_normal(1.0, -2.0, 4.0) == pytest.approx(
            -0.6379121715568146, abs=1e-14)

    def test_g_normal_limit_at_zero(self):
        assert eval_g_normal(1.0, 0.0, 4.0) == pytest.approx(
            -math.exp(-2.0) + 1.0)

    def test_g_monotone(self):
        values = [eval_g_critical(0.5, p) for p in (-3.0, -2.0, -1.0, -0.5)]
        assert values == sorted(values)


class TestErrorPaths:
    def test_pole_at_origin(self):
        with pytest.raises(SingularityError):
            eval_v(params(4.0, Flavor.CRITICAL, 1.0), 0.0)

    def test_branch_cut(self):
        # the critical cut sits at real eta >= 1/(e^{2t}-1)
        pr = params(4.0, Flavor.CRITICAL, 1.0)
        with pytest.raises(BranchCutError):
            eval_v(pr, 2.0 / math.expm1(2.0))

    def test_invalid_params(self):
        with pytest.raises(DomainError):
            FlowParams(-1.0, Flavor.CRITICAL, 1.0)
        with pytest.raises(DomainError):
            FlowParams(4.0, Flavor.CRITICAL, -0.5)
        with pytest.raises(DomainError):
            FlowParams(4.0, "critical", 1.0)

    def test_nonfinite_argument(self):
        with pytest.raises(DomainError):
            eval_v(params(4.0, Flavor.CRITICAL, 1.0), float("nan"))


def test_real_input_returns_float():
    pr = params(4.0, Flavor.CRITICAL, 1.0)
    assert isinstance(eval_v(pr, -2.0), float)
    assert isinstance(eval_v(pr, -2.0 + 0.1j), complex)
