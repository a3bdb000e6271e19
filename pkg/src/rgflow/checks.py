"""Quantitative verification suite.

Each ``criterion_*`` function runs one group of numerical checks against
independently computed reference values (closed forms, high-order ODE
integration, quadrature, or exact constants) and returns a structured
:class:`CheckResult`.  The command-line ``verify`` subcommand and the
acceptance tests both drive these functions, so there is a single code
path for every quantitative claim.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .flow import Flavor, FlowParams, eval_dv, eval_dv_dt, eval_v
from .geometry import (
    alpha_of_t,
    boundary_curve,
    edge_of_t,
    fixed_points,
    t_crossover,
    t_star,
    zero_density,
)
from .initial import f0_stieltjes, rho_initial, theta_prime_n, u0_prime
from .invert import (
    characteristic_p_closed,
    characteristics_oracle,
    mu_of_beta,
    phat_of_beta,
    solve_pbar,
    u_of_x,
)

__all__ = ["CheckItem", "CheckResult", "run_suite", "SUITES", "CRITERIA"]


@dataclass(frozen=True)
class CheckItem:
    """One measured quantity compared against its bound."""

    label: str
    measured: float
    bound: float
    passed: bool


@dataclass
class CheckResult:
    """Outcome of one criterion: a list of items, passing iff all do."""

    name: str
    items: list = field(default_factory=list)

    def check(self, label: str, measured: float, bound: float):
        self.items.append(CheckItem(label, float(measured), float(bound),
                                    bool(measured <= bound)))

    def check_flag(self, label: str, ok: bool):
        self.items.append(CheckItem(label, 0.0 if ok else 1.0, 0.0, bool(ok)))

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)


_BETAS = (1.0, 2.0, 3.0, 4.0)


def criterion_initial_reduction() -> CheckResult:
    """v(0, p) equals the common initial value 1/(2p) + beta/(4p^2)."""
    res = CheckResult("initial-condition reduction at t=0")
    grid = np.linspace(-3.9, -0.01, 400)
    for flavor in Flavor:
        for beta in _BETAS:
            params = FlowParams(beta, flavor, 0.0)
            worst = max(
                abs(eval_v(params, p) - (1.0 / (2.0 * p) + beta / (4.0 * p * p)))
                for p in grid
            )
            res.check(f"{flavor.value} beta={beta:g} max|v(0,p)-v0(p)|",
                      worst, 1e-12)
    return res


def criterion_pde_residuals() -> CheckResult:
    """Closed forms satisfy their evolution equations on a (t, p) grid."""
    res = CheckResult("evolution-equation residuals")
    ts = np.linspace(0.1, 4.0, 50)
    ps = np.linspace(-3.0, -0.2, 50)
    worst_c = 0.0
    for t in ts:
        params = FlowParams(4.0, Flavor.CRITICAL, float(t))
        for p in ps:
            r = (eval_dv_dt(params, p) - 2.0 * p * (1.0 + p) * eval_dv(params, p)
                 + 1.0 - (6.0 + 4.0 * p) * eval_v(params, p))
            worst_c = max(worst_c, abs(r))
    res.check("critical beta=4 max PDE residual", worst_c, 1e-6)
    worst_n = 0.0
    for t in ts:
        params = FlowParams(2.0, Flavor.NORMAL, float(t))
        emt = math.exp(-2.0 * float(t))
        for p in ps:
            r = (eval_dv_dt(params, p)
                 - 2.0 * p * p * emt * eval_dv(params, p)
                 + emt - (4.0 + 4.0 * emt * p) * eval_v(params, p))
            worst_n = max(worst_n, abs(r))
    res.check("normal beta=2 max PDE residual", worst_n, 1e-6)
    return res


def criterion_characteristics() -> CheckResult:
    """RK4 transport along characteristics reproduces the closed forms."""
    res = CheckResult("characteristics oracle vs closed forms")
    p0s = (-0.9, -0.7, -0.5, -0.35, -0.2, 0.2, 0.5, 0.8, 1.1, 1.5)
    tvals = (0.8, 1.4)
    for flavor in Flavor:
        beta = 4.0 if flavor is Flavor.CRITICAL else 2.0
        worst_p = worst_v = 0.0
        ratios = []
        for p0 in p0s:
            for t in tvals:
                params = FlowParams(beta, flavor, t)
                state = characteristics_oracle(params, p0, t, 10_000)
                p_exact = characteristic_p_closed(params, p0, t)
                v_exact = eval_v(params, p_exact)
                worst_p = max(worst_p, abs(state.p - p_exact))
                worst_v = max(worst_v, abs(state.V - v_exact))
                # measure the O(h^4) scaling at coarser steps, where the
                # truncation error dominates rounding noise
                err_5k = abs(characteristics_oracle(params, p0, t,
                                                    5_000).V - v_exact)
                err_25 = abs(characteristics_oracle(params, p0, t,
                                                    2_500).V - v_exact)
                if err_5k > 1e-12:
                    ratios.append(err_25 / err_5k)
        res.check(f"{flavor.value} max |dp| (1e4 steps)", worst_p, 1e-10)
        res.check(f"{flavor.value} max |dV| (1e4 steps)", worst_v, 1e-8)
        ratio = float(np.median(ratios))
        res.check_flag(
            f"{flavor.value} halving ratio {ratio:.2f} in 16*(1 +/- 0.3)",
            16.0 * 0.7 <= ratio <= 16.0 * 1.3,
        )
    return res


def criterion_invariant_point() -> CheckResult:
    """v(t, -1) = 1/2 and pbar(t, 1/2) = -1 at criticality."""
    res = CheckResult("invariant point of the critical flow")
    for t in (0.0, 1.0, 5.0, 20.0):
        params = FlowParams(4.0, Flavor.CRITICAL, t)
        res.check(f"|v({t:g},-1) - 1/2|", abs(eval_v(params, -1.0) - 0.5),
                  1e-10)
        pb = solve_pbar(params, 0.5).pbar
        res.check(f"|pbar({t:g},1/2) + 1|", abs(pb + 1.0), 1e-10)
    return res


def criterion_gaussian_limit() -> CheckResult:
    """Large-t behavior of the critical branch: pbar -> -1 at rate 1/(4t).

    The deviation satisfies pbar(t, 0) + 1 = -1/(4t) + o(1/t), so the
    measured quantity is |pbar + 1 + 1/(4t)|.
    """
    res = CheckResult("Gaussian limit of the critical flow")
    for t in (50.0, 100.0, 500.0):
        params = FlowParams(4.0, Flavor.CRITICAL, t)
        pb = solve_pbar(params, 0.0).pbar.real
        res.check(f"t={t:g}: |pbar(t,0) + 1 + 1/(4t)|",
                  abs(pb + 1.0 + 1.0 / (4.0 * t)), 0.3 / t)
    params = FlowParams(4.0, Flavor.CRITICAL, 50.0)
    worst = max(
        abs(u_of_x(params, float(x)) + float(x))
        for x in np.linspace(-0.05, 1.0, 22)
    )
    res.check("max |u(50,x) + x| on [-0.05, 1]", worst, 2e-2)
    return res


def criterion_normal_limit() -> CheckResult:
    """Plateau identity and exponential convergence of the normal branch.

    The two-term expansion is pbar = phat (1 + phat e^{-2t}) + O(e^{-4t}),
    so the fitted decay rate is 2 and the fitted relative prefactor is
    |phat| itself.
    """
    res = CheckResult("normal-flavor limit and thermodynamic identity")
    ts = np.linspace(3.0, 8.0, 11)
    for beta in (1.0, 2.0, 3.0):
        phat = phat_of_beta(beta)
        mu = mu_of_beta(beta)
        res.check(f"beta={beta:g}: |phat - 1/(2 mu)|",
                  abs(phat - 1.0 / (2.0 * mu)), 1e-10)
        devs = []
        for t in ts:
            params = FlowParams(beta, Flavor.NORMAL, float(t))
            pb = solve_pbar(params, 0.0).pbar.real
            devs.append(abs(pb - phat))
        slope, intercept = np.polyfit(ts, np.log(devs), 1)
        rate = -slope
        res.check(f"beta={beta:g}: |fitted rate - 2|", abs(rate - 2.0),
                  2.0 * 0.05)
        prefactor = math.exp(intercept)
        # The first-order expansion of the plateau equation gives the
        # relative coefficient exactly phat (so |pbar - phat| has prefactor
        # phat^2); the published coefficient 4(phat+2)/(beta-4phat(4-beta))
        # disagrees with the exact solution (see KNOWN DEFECTS in the
        # README) and the check against it is expected to fail.
        stated = 4.0 * (phat + 2.0) / (beta - 4.0 * phat * (4.0 - beta))
        res.check(
            f"beta={beta:g}: |prefactor/(phat*stated-coef) - 1| "
            "[known defect]",
            abs(prefactor / (phat * stated) - 1.0), 0.05)
        res.check(f"beta={beta:g}: |prefactor/phat^2 - 1| (exact-solution "
                  "coefficient, diagnostic)",
                  abs(prefactor / (phat * phat) - 1.0), 0.05)
    return res


def criterion_geometry_constants() -> CheckResult:
    """Turning point, support edge and boundary-shape limits."""
    res = CheckResult("geometry constants and boundary shapes")
    res.check("|alpha(0) - 4|", abs(alpha_of_t(0.0) - 4.0), 1e-8)
    # alpha - 3/2 decays like ~0.6/t, so the true t=20 deviation is ~0.0299
    # and the stated 0.02 bound cannot hold (see KNOWN DEFECTS in the
    # README); the following diagnostic pins the solver against a 50-digit
    # independent root of v_p(20, -alpha) = 0.
    res.check("|alpha(20) - 3/2| [known defect]",
              abs(alpha_of_t(20.0) - 1.5), 0.02)
    res.check("|alpha(20) - 1.5299248792124955| (50-digit root, diagnostic)",
              abs(alpha_of_t(20.0) - 1.5299248792124955), 1e-9)
    res.check("|d(0) - 1/16|", abs(edge_of_t(0.0) - 1.0 / 16.0), 1e-10)
    res.check("|d(50)/50 / (8/27) - 1|",
              abs(edge_of_t(50.0) / 50.0 / (8.0 / 27.0) - 1.0), 0.05)
    arc0 = boundary_curve(0.0, 128).arc
    worst = max(
        abs(q - math.sqrt(max(4.0 - (p + 2.0) ** 2, 0.0))) for p, q in arc0
    )
    res.check("t=0 arc vs semicircle", worst, 1e-8)
    # folium comparison by point-to-curve distance (a vertical comparison
    # diverges at the square-root edge p = -3/2)
    ps = np.linspace(-1.5, 0.0, 20001)
    num = 3.0 * ps**2 + 2.0 * ps**3
    hs = np.sqrt(np.maximum(num / (1.0 - 2.0 * ps), 0.0))
    # at t=20 the arc is still ~0.0299 away from the limit curve (the
    # approach is O(1/t), matching the alpha deviation above), so the 2e-2
    # bound only holds from t ~ 30 on; the t=50 diagnostic shows the
    # convergence.
    for t, tol, note in ((20.0, 2e-2, " [known defect]"),
                         (50.0, 2e-2, " (diagnostic)")):
        arc = boundary_curve(t, 128).arc
        dmax = max(
            float(np.min(np.hypot(ps - p, hs - q))) for p, q in arc
        )
        res.check(f"t={t:g} arc to folium distance{note}", dmax, tol)
    return res


def criterion_fixed_points() -> CheckResult:
    """Fixed-point constants, the collision scale, and the crossover."""
    res = CheckResult("fixed points, collision and crossover scales")
    fp0 = fixed_points(0.0)
    z0 = fp0.zeta
    res.check("|zeta0 - (-0.582687+0.720119i)|",
              abs(z0 - complex(-0.582687, 0.720119)), 1e-5)
    res.check("|2 zeta0^3 - zeta0 - 2|", abs(2.0 * z0**3 - z0 - 2.0), 1e-9)
    ts = t_star(1e-4)
    res.check("|t_star - 5.155075|", abs(ts - 5.155075), 1e-3)
    tco = t_crossover(1e-6)
    res.check_flag(f"t_co = {tco:.6f} > t_star", tco > ts)
    gap = fixed_points(tco).zeta_star.real + alpha_of_t(tco)
    res.check("|zeta_star(t_co) + alpha(t_co)|", abs(gap), 1e-6)
    return res


def criterion_zero_density() -> CheckResult:
    """Zero density at t=0 and qualitative behavior for t > 0."""
    res = CheckResult("zero-density reduction and support motion")
    zm = zero_density(0.0, 102)
    worst = max(
        abs(rho - 4.0 * rho_initial(4.0 * lam)) for lam, rho in zm.samples
    )
    res.check("t=0 density vs scaled initial density (100 pts)", worst, 1e-6)
    res.check("|f0(0) + 1/2|", abs(f0_stieltjes(0.0) + 0.5), 1e-8)
    edges = []
    for t in (1.0, 2.0, 4.0):
        zm = zero_density(t, 64)
        res.check_flag(f"t={t:g}: density nonnegative",
                       bool(np.all(zm.samples[:, 1] >= 0.0)))
        edges.append(-zm.edge)
    res.check_flag("support edge -d(t) strictly decreasing",
                   edges[0] > edges[1] > edges[2])
    return res


def _uhp_grid(rmin: float, rmax: float, n_r: int = 20, n_th: int = 10):
    rs = np.logspace(math.log10(rmin), math.log10(rmax), n_r)
    ths = np.linspace(0.15, math.pi - 0.15, n_th)
    return [complex(r * math.cos(th), r * math.sin(th))
            for r in rs for th in ths]


def criterion_pick_class() -> CheckResult:
    """Upper-half-plane maps stay in the upper half plane; domains nest."""
    res = CheckResult("Pick-class positivity and domain nesting")
    pts = _uhp_grid(1e-2, 10.0)
    res.check_flag(
        "Im u0'(z) > 0 at 200 UHP points",
        all(u0_prime(z, 4.0).imag > 0.0 for z in pts),
    )
    pts_n = _uhp_grid(1e-3, 1.0 / 16.5)
    res.check_flag(
        "Im theta_50'(z) > 0 at 200 UHP points",
        all(theta_prime_n(50, z, 4.0).imag > 0.0 for z in pts_n),
    )
    params = FlowParams(4.0, Flavor.CRITICAL, 1.0)
    pts_p = _uhp_grid(1e-2, 3.0)
    res.check_flag(
        "Im pbar(1, z) > 0 at 200 UHP points",
        all(solve_pbar(params, z).pbar.imag > 0.0 for z in pts_p),
    )
    tlist = (0.0, 0.5, 1.0, 2.0, 4.0)
    curves = {t: boundary_curve(t, 64) for t in tlist}
    nested = True
    for i, t_lo in enumerate(tlist):
        for t_hi in tlist[i + 1:]:
            b_lo, b_hi = curves[t_lo], curves[t_hi]
            if b_hi.alpha > b_lo.alpha + 1e-10:
                nested = False
            hi_interior = b_hi.arc[1:-1]
            h_lo = np.interp(hi_interior[:, 0], b_lo.arc[:, 0],
                             b_lo.arc[:, 1])
            if np.any(hi_interior[:, 1] > h_lo + 1e-8):
                nested = False
    res.check_flag("Omega_t nesting pairwise on {0,0.5,1,2,4}", nested)
    return res


def criterion_finite_n() -> CheckResult:
    """Finite-N derivative converges to the limit at rate 1/N."""
    res = CheckResult("finite-N convergence rate")
    # stay away from the square-root branch point at x = -1/16, where the
    # 1/N rate degrades nonuniformly
    grid = np.linspace(-0.04, 0.04, 101)
    errs = {}
    for n in (100, 200):
        errs[n] = max(
            abs(theta_prime_n(n, float(x), 4.0) - u0_prime(float(x), 4.0))
            for x in grid
        )
    ratio = errs[100] / errs[200]
    res.check_flag(
        f"error ratio N=100/N=200 = {ratio:.3f} in 2*(1 +/- 0.2)",
        2.0 * 0.8 <= ratio <= 2.0 * 1.2,
    )
    return res


CRITERIA = (
    criterion_initial_reduction,
    criterion_pde_residuals,
    criterion_characteristics,
    criterion_invariant_point,
    criterion_gaussian_limit,
    criterion_normal_limit,
    criterion_geometry_constants,
    criterion_fixed_points,
    criterion_zero_density,
    criterion_pick_class,
    criterion_finite_n,
)

SUITES = {
    "pde": (criterion_initial_reduction, criterion_pde_residuals),
    "inversion": (criterion_characteristics, criterion_invariant_point),
    "limits": (criterion_gaussian_limit, criterion_normal_limit),
    "geometry": (criterion_geometry_constants, criterion_fixed_points),
    "initial": (criterion_zero_density, criterion_pick_class,
                criterion_finite_n),
    "all": CRITERIA,
}


def run_suite(suite: str):
    """Run a named suite and return the list of :class:`CheckResult`."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return [fn() for fn in SUITES[suite]]
