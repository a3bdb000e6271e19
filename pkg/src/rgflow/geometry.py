"""Conformal geometry of the critical flow at beta = 4.

The map p -> v(t, p) sends an open convex region Omega_t in the upper half
plane onto the upper half plane; this module computes its boundary curve
q = h(t, p) over the segment [-alpha(t), 0], the induced Lee-Yang zero
density on the support (-inf, -d(t)), the fixed points of v(t, .), the
scale t_star at which the conjugate fixed-point pair collides onto the
real axis, and the later crossover scale t_co where the leftmost real
fixed point meets -alpha(t).

All operations here are specific to the critical flavor at beta = 4, the
only case where the image domain is exactly the upper half plane.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ConvergenceError, DomainError
from .flow import Flavor, FlowParams, eval_dv, eval_v
from .invert import spectral_edge, turning_point

__all__ = [
    "DomainBoundary",
    "ZeroMeasure",
    "FixedPointSet",
    "Regime",
    "alpha_of_t",
    "edge_of_t",
    "boundary_curve",
    "domain_contains",
    "zero_density",
    "fixed_points",
    "t_star",
    "t_crossover",
]

_BETA_C = 4.0
_Q_MAX = 2.5  # Omega_t sits inside the t=0 semi-disc of radius 2
_Q_MIN = 1e-12


def _params(t: float) -> FlowParams:
    if t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t}")
    return FlowParams(_BETA_C, Flavor.CRITICAL, t)


@dataclass(frozen=True)
class DomainBoundary:
    """Boundary arc q = h(t, p) of Omega_t over p in [-alpha, 0].

    ``arc`` is an (n, 2) array of (p, q) samples ordered by increasing p,
    with the endpoint values q = 0 pinned exactly.  Points where the
    bisection bracket failed are excluded from the arc and listed in
    ``failed`` by their p value.
    """

    t: float
    alpha: float
    arc: np.ndarray
    failed: np.ndarray


@dataclass(frozen=True)
class ZeroMeasure:
    """Zero density at scale t, sampled along the boundary parametrization.

    ``samples`` is an (n, 2) array of (lambda, rho) pairs with
    lambda = v(t, p + i h(t, p)) real and rho = h(t, p) / pi; the support
    is (-inf, -edge).  The lambda grid is induced by the p-grid and is
    non-uniform.
    """

    t: float
    edge: float
    samples: np.ndarray


class Regime(enum.Enum):
    CONJUGATE_PAIR = "conjugate-pair"
    REAL_PAIR = "real-pair"


@dataclass(frozen=True)
class FixedPointSet:
    """The last two fixed points of v(t, .) at scale t.

    Below the collision scale they form a conjugate pair (``zeta`` in the
    upper half plane, ``zeta_star`` its conjugate); at and above it both
    are real and ``zeta_star`` is the more negative one.
    """

    t: float
    zeta: complex
    zeta_star: complex
    regime: Regime


# ---------------------------------------------------------------------------
# Turning point and spectral edge at beta = 4
# ---------------------------------------------------------------------------

def alpha_of_t(t: float) -> float:
    """Turning-point abscissa alpha(t) > 0, root of v_p(t, -alpha) = 0.

    alpha(0) = 4, strictly decreasing, with limit 3/2.
    """
    return -turning_point(_params(t))


def edge_of_t(t: float) -> float:
    """Support edge d(t) = -v(t, -alpha(t)); d(0) = 1/16, d(t)/t -> 8/27."""
    return spectral_edge(_params(t))


# ---------------------------------------------------------------------------
# Boundary curve and membership
# ---------------------------------------------------------------------------

def _height(params: FlowParams, p: float) -> float:
    """Unique q in (0, 2.5] with Im v(t, p + iq) = 0, by bisection."""

    def im_v(q):
        return eval_v(params, complex(p, q)).imag

    f_lo = im_v(_Q_MIN)
    f_hi = im_v(_Q_MAX)
    if not (f_lo > 0.0 > f_hi or f_lo < 0.0 < f_hi):
        raise BracketError(
            f"no sign change of Im v on q in ({_Q_MIN:g}, {_Q_MAX:g}] "
            f"at p = {p}"
        )
    return brentq(im_v, _Q_MIN, _Q_MAX, xtol=1e-14, rtol=8.9e-16,
                  maxiter=200)


def boundary_curve(t: float, n_points: int = 256) -> DomainBoundary:
    """Sample the boundary q = h(t, p) of Omega_t on a grid over (-alpha, 0).

    Endpoints (-alpha, 0) and (0, 0) are pinned exactly; each interior
    height is the bisection root of Im v(t, p + iq) = 0 in q.  Bracket
    failures are recorded per point rather than aborting the whole curve.
    """
    if n_points < 16:
        raise DomainError(f"n_points must be >= 16, got {n_points}")
    params = _params(t)
    alpha = alpha_of_t(t)
    grid = np.linspace(-alpha, 0.0, n_points)
    pts = [(-alpha, 0.0)]
    failed = []
    for p in grid[1:-1]:
        try:
            pts.append((float(p), _height(params, float(p))))
        except BracketError:
            failed.append(float(p))
    pts.append((0.0, 0.0))
    return DomainBoundary(t=t, alpha=alpha, arc=np.array(pts),
                          failed=np.array(failed))


def domain_contains(t: float, eta) -> bool:
    """Membership test for Omega_t (open region, upper half plane part)."""
    eta = complex(eta)
    alpha = alpha_of_t(t)
    if not (-alpha < eta.real < 0.0):
        return False
    if eta.imag <= 0.0:
        return False
    try:
        h = _height(_params(t), eta.real)
    except BracketError:
        return False
    return eta.imag < h


# ---------------------------------------------------------------------------
# Zero density
# ---------------------------------------------------------------------------

def zero_density(t: float, n_points: int = 256) -> ZeroMeasure:
    """Zero density rho(t, lambda) on the support (-inf, -d(t)).

    Parametrized by the boundary: lambda(p) = v(t, p + i h(t, p)) is real
    on the boundary (certified to 1e-8) and rho = h(t, p) / pi.  Samples
    are returned ordered by increasing lambda.
    """
    boundary = boundary_curve(t, n_points)
    params = _params(t)
    samples = []
    for p, q in boundary.arc:
        if q <= 0.0:
            continue
        lam = eval_v(params, complex(p, q))
        if abs(lam.imag) > 1e-8:
            raise ConvergenceError(
                f"boundary point p={p} is not real under v: Im = {lam.imag:g}"
            )
        samples.append((lam.real, q / math.pi))
    samples.sort()
    return ZeroMeasure(t=t, edge=edge_of_t(t), samples=np.array(samples))


# ---------------------------------------------------------------------------
# Fixed points, collision scale, crossover scale
# ---------------------------------------------------------------------------

def _zeta_seed() -> complex:
    """Upper-half-plane root of 2 zeta^3 - zeta - 2 (t = 0 fixed point)."""
    roots = np.roots([2.0, 0.0, -1.0, -2.0])
    root = max(roots, key=lambda r: r.imag)
    return complex(root)


def _newton_fixed(params: FlowParams, z: complex, tol: float = 1e-12,
                  max_iter: int = 80) -> complex:
    for _ in range(max_iter):
        f = eval_v(params, z) - z
        if abs(f) <= tol:
            return z
        df = eval_dv(params, z) - 1.0
        if df == 0:
            raise ConvergenceError("degenerate Jacobian at a fixed point")
        step = f / df
        if abs(step) > 1.0:
            raise ConvergenceError("Newton step blow-up near collision")
        z = z - step
    raise ConvergenceError("fixed-point Newton did not converge")


@lru_cache(maxsize=2048)
def _continue_zeta(t: float) -> complex:
    """Track the fixed point continued from the t = 0 complex root.

    Steps of Delta t = 0.05, halved whenever Newton stalls (the Jacobian
    degenerates where the conjugate pair collides).  Past the collision
    the iterate lands on one of the two real fixed points.
    """
    z = _zeta_seed()
    t_cur = 0.0
    dt = 0.05
    while t_cur < t:
        t_next = min(t_cur + dt, t)
        try:
            z = _newton_fixed(_params(t_next), z)
        except ConvergenceError:
            dt /= 2.0
            if dt < 1e-9:
                raise ConvergenceError(
                    f"fixed-point continuation stalled at t = {t_cur:.9g}"
                )
            continue
        t_cur = t_next
        if dt < 0.05:
            dt = min(dt * 2.0, 0.05)
    return z


def _second_real_root(params: FlowParams, r1: float) -> float:
    """Other real fixed point near a known one, via the local quadratic.

    Near the collision v(t, p) - p is locally c (p - r1)(p - r2); the
    quadratic estimate r2 = r1 - 2 f'(r1) / f''(r1) is polished by Newton
    on the deflated function f(p) / (p - r1).
    """
    h = 1e-6

    def f(p):
        return eval_v(params, p) - p

    def fp(p):
        return eval_dv(params, p) - 1.0

    fpp = (fp(r1 + h) - fp(r1 - h)) / (2.0 * h)
    if fpp == 0.0:
        raise ConvergenceError("flat curvature at the real fixed point")
    r2 = r1 - 2.0 * fp(r1) / fpp
    for _ in range(60):
        if r2 == r1:
            break
        g = f(r2) / (r2 - r1)
        gp = (fp(r2) * (r2 - r1) - f(r2)) / (r2 - r1) ** 2
        if gp == 0.0:
            break
        step = g / gp
        r2 -= step
        if abs(step) <= 1e-13 * max(1.0, abs(r2)):
            break
    if abs(f(r2)) > 1e-9:
        raise ConvergenceError(
            f"deflated Newton left residual {abs(f(r2)):g} for the second "
            "real fixed point"
        )
    return r2


_REAL_REGIME_TOL = 1e-8


def fixed_points(t: float) -> FixedPointSet:
    """The last two fixed points of v(t, .) and their regime.

    Continued from the t = 0 complex root of 2 zeta^3 - zeta - 2; below
    the collision scale the pair is (zeta, conj(zeta)), above it both are
    real and zeta_star is the more negative root.
    """
    params = _params(t)
    z = _continue_zeta(t)
    if abs(z.imag) >= _REAL_REGIME_TOL:
        if z.imag < 0.0:
            z = z.conjugate()
        return FixedPointSet(t=t, zeta=z, zeta_star=z.conjugate(),
                             regime=Regime.CONJUGATE_PAIR)
    r1 = z.real
    r1 = _newton_polish_real(params, r1)
    r2 = _second_real_root(params, r1)
    lo, hi = (r1, r2) if r1 <= r2 else (r2, r1)
    return FixedPointSet(t=t, zeta=complex(hi), zeta_star=complex(lo),
                         regime=Regime.REAL_PAIR)


def _newton_polish_real(params: FlowParams, r: float) -> float:
    """Polish a real fixed point with plain Newton on v(t, p) - p."""
    for _ in range(40):
        f = eval_v(params, r) - r
        if abs(f) <= 1e-13 * max(1.0, abs(r)):
            return r
        df = eval_dv(params, r) - 1.0
        if df == 0.0:
            return r
        r -= f / df
    return r


def t_star(tol: float = 1e-6) -> float:
    """Collision scale: the conjugate pair becomes real for t >= t_star.

    Bisection in t on the regime flag of :func:`fixed_points`.
    """
    if tol < 1e-8:
        raise DomainError(f"tol must be >= 1e-8, got {tol}")
    lo, hi = 4.0, 6.0
    if fixed_points(lo).regime is not Regime.CONJUGATE_PAIR:
        raise BracketError("regime at t = 4 is not a conjugate pair")
    if fixed_points(hi).regime is not Regime.REAL_PAIR:
        raise BracketError("regime at t = 6 is not a real pair")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fixed_points(mid).regime is Regime.CONJUGATE_PAIR:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def t_crossover(tol: float = 1e-6) -> float:
    """Crossover scale t_co > t_star where zeta_star(t) = -alpha(t)."""
    if tol < 1e-6:
        raise DomainError(f"tol must be >= 1e-6, got {tol}")
    ts = t_star(1e-4)

    def gap(t):
        return fixed_points(t).zeta_star.real + alpha_of_t(t)

    lo = ts + 0.01
    g_lo = gap(lo)
    hi = lo
    step = 0.5
    g_hi = g_lo
    for _ in range(60):
        hi = hi + step
        g_hi = gap(hi)
        if g_lo * g_hi <= 0.0:
            break
        step *= 1.5
    else:
        raise BracketError("failed to bracket the crossover scale")
    return brentq(gap, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                  maxiter=200)
