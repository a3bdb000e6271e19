"""Tests for the conformal-geometry layer: boundary curves, zero density,
fixed points and the two distinguished scales.

Frozen references come from 40-digit root finding on the closed forms.
"""

import math

import numpy as np
import pytest

from rgflow import (
    DomainError,
    Regime,
    alpha_of_t,
    boundary_curve,
    domain_contains,
    edge_of_t,
    fixed_points,
    rho_initial,
    t_crossover,
    t_star,
    zero_density,
)


class TestTurningPoint:
    def test_alpha_at_zero(self):
        assert alpha_of_t(0.0) == pytest.approx(4.0, abs=1e-12)

    def test_alpha_frozen_t2(self):
        assert alpha_of_t(2.0) == pytest.approx(1.8028948504497325, abs=1e-12)

    def test_alpha_monotone_decreasing(self):
        values = [alpha_of_t(t) for t in np.arange(0.0, 5.5, 0.5)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_alpha_limit(self):
        # alpha - 3/2 decays like ~0.6/t
        assert alpha_of_t(50.0) == pytest.approx(1.5, abs=0.02)


class TestEdge:
    def test_edge_at_zero(self):
        assert edge_of_t(0.0) == pytest.approx(1.0 / 16.0, abs=1e-13)

    def test_edge_frozen_t2(self):
        assert edge_of_t(2.0) == pytest.approx(0.597343918986841, abs=1e-12)

    def test_linear_growth(self):
        assert edge_of_t(50.0) / 50.0 == pytest.approx(8.0 / 27.0, rel=0.05)

    def test_monotone_increasing(self):
        values = [edge_of_t(t) for t in (0.0, 0.5, 1.0, 2.0, 4.0)]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestBoundary:
    def test_semicircle_at_t0(self):
        arc = boundary_curve(0.0, 64).arc
        for p, q in arc:
            expected = math.sqrt(max(4.0 - (p + 2.0) ** 2, 0.0))
            assert q == pytest.approx(expected, abs=1e-10)

    def test_frozen_height(self):
        b = boundary_curve(1.0, 33)  # grid contains p close to -1
        arc = dict((round(p, 6), q) for p, q in b.arc)
        # h(1, -1) from multiprecision bisection
        from rgflow import FlowParams, Flavor, eval_v
        pr = FlowParams(4.0, Flavor.CRITICAL, 1.0)
        q = [q for p, q in b.arc if abs(p + 1.0) < 0.05]
        assert q, "grid should sample near p = -1"
        # direct check at exactly p = -1 via the membership helper
        assert eval_v(pr, complex(-1.0, 0.90789720404062531)).imag == \
            pytest.approx(0.0, abs=1e-12)

    def test_endpoints_pinned(self):
        b = boundary_curve(2.0, 32)
        assert b.arc[0][0] == pytest.approx(-b.alpha)
        assert b.arc[0][1] == 0.0
        assert b.arc[-1][0] == 0.0
        assert b.arc[-1][1] == 0.0

    def test_concave_arc(self):
        b = boundary_curve(1.0, 128)
        p, q = b.arc[:, 0], b.arc[:, 1]
        # discrete second derivative on the uniform interior grid
        d2 = q[2:] - 2.0 * q[1:-1] + q[:-2]
        assert np.all(d2 < 1e-10)

    def test_small_t_disc(self):
        t = 0.05
        b = boundary_curve(t, 64)
        c = 2.0 * (1.0 + 2.0 * t) / (1.0 + 4.0 * t)
        worst = max(abs(math.hypot(p + c, q) - c) for p, q in b.arc)
        assert worst < 3e-2

    def test_no_failures_on_test_scales(self):
        for t in (0.0, 1.0, 5.0):
            assert boundary_curve(t, 32).failed.size == 0

    def test_min_points(self):
        with pytest.raises(DomainError):
            boundary_curve(1.0, 8)


class TestContainment:
    def test_t0_semidisc(self):
        assert domain_contains(0.0, -2.0 + 0.5j)
        assert not domain_contains(0.0, -2.0 + 2.1j)
        assert not domain_contains(0.0, -4.5 + 0.1j)
        assert not domain_contains(0.0, -2.0 - 0.5j)

    def test_shrinking_family(self):
        eta = -2.0 + 0.5j
        assert domain_contains(0.0, eta)
        # alpha(2) < 2, so the segment no longer reaches this point
        assert not domain_contains(2.0, eta)
        # a point inside the limit folium stays inside at every scale
        inner = -1.0 + 0.4j
        for t in (0.0, 1.0, 4.0):
            assert domain_contains(t, inner)


class TestZeroDensity:
    def test_t0_reduction(self):
        zm = zero_density(0.0, 64)
        for lam, rho in zm.samples:
            assert rho == pytest.approx(4.0 * rho_initial(4.0 * lam),
                                        abs=1e-8)

    def test_edge_vanishing(self):
        zm = zero_density(1.0, 64)
        # samples are ordered by lambda; the last ones approach the edge
        assert zm.samples[-1][1] < zm.samples[len(zm.samples) // 2][1]
        assert np.all(zm.samples[:, 0] < -zm.edge + 1e-9)

    def test_nonnegative(self):
        for t in (0.0, 2.0):
            zm = zero_density(t, 48)
            assert np.all(zm.samples[:, 1] >= 0.0)


class TestFixedPoints:
    def test_t0_root(self):
        fp = fixed_points(0.0)
        assert fp.regime is Regime.CONJUGATE_PAIR
        assert fp.zeta == pytest.approx(-0.582687 + 0.720119j, abs=1e-5)
        assert abs(2.0 * fp.zeta**3 - fp.zeta - 2.0) < 1e-9
        assert fp.zeta_star == pytest.approx(fp.zeta.conjugate())

    def test_frozen_t2(self):
        fp = fixed_points(2.0)
        assert fp.zeta == pytest.approx(
            -1.1186275073875505 + 0.51343817288000764j, abs=1e-10)

    def test_real_pair_past_collision(self):
        fp = fixed_points(6.0)
        assert fp.regime is Regime.REAL_PAIR
        assert fp.zeta.imag == 0.0 and fp.zeta_star.imag == 0.0
        assert fp.zeta_star.real < fp.zeta.real

    def test_fixed_point_equation(self):
        from rgflow import FlowParams, Flavor, eval_v
        for t in (1.0, 3.0, 6.0):
            fp = fixed_points(t)
            pr = FlowParams(4.0, Flavor.CRITICAL, t)
            assert abs(eval_v(pr, fp.zeta) - fp.zeta) < 1e-9
            assert abs(eval_v(pr, fp.zeta_star) - fp.zeta_star) < 1e-9


class TestScales:
    def test_t_star(self):
        ts = t_star(1e-4)
        assert ts == pytest.approx(5.155075, abs=1e-3)
        assert fixed_points(ts - 0.1).regime is Regime.CONJUGATE_PAIR
        assert fixed_points(ts + 0.1).regime is Regime.REAL_PAIR

    def test_crossover(self):
        tco = t_crossover(1e-6)
        assert tco > t_star(1e-4)
        gap = fixed_points(tco).zeta_star.real + alpha_of_t(tco)
        assert abs(gap) < 1e-6

    def test_tolerance_guards(self):
        with pytest.raises(DomainError):
            t_star(1e-9)
        with pytest.raises(DomainError):
            t_crossover(1e-7)
