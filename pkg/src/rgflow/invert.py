"""Inversion of the flow: the principal branch of x = v(t, p).

The regular-at-origin branch ``pbar(t, x)`` is the derivative of the cumulant
generator at scale t.  Real arguments are solved by monotone bracketing
between the turning point of v and the origin; complex arguments by Newton
continuation in t starting from the closed-form t = 0 inverse.  A contour
integral (argument-principle form) and a fixed-step RK4 integration of the
characteristic ODEs provide independent routes used for cross-validation.

The module also solves the two scalar thermodynamic equations: the
temperature-chemical-potential relation mu(beta) and the large-t plateau
phat(beta) of the normal-flavor branch, linked by phat = 1/(2 mu).
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import (
    BlowUpError,
    BracketError,
    ContainmentError,
    ConvergenceError,
    DomainError,
    OffBranchError,
)
from .flow import Flavor, FlowParams, eval_dv, eval_v
from .initial import u0_prime

__all__ = [
    "CharState",
    "InversionMethod",
    "InversionResult",
    "characteristic_p_closed",
    "characteristics_oracle",
    "solve_pbar",
    "invert_contour",
    "u_of_x",
    "pbar_asymptotic_critical",
    "pbar_asymptotic_normal",
    "mu_of_beta",
    "phat_of_beta",
    "turning_point",
    "spectral_edge",
]

_BLOWUP_LIMIT = 1e12


class InversionMethod(enum.Enum):
    NEWTON = "newton"
    CONTOUR_INTEGRAL = "contour-integral"
    BISECTION = "bisection"


@dataclass(frozen=True)
class InversionResult:
    """Principal-branch solution of v(t, p) = x with diagnostics."""

    pbar: complex
    residual: float
    method: InversionMethod
    iterations: int


@dataclass(frozen=True)
class CharState:
    """State (p, V) transported along a characteristic up to scale t."""

    p: float
    V: float
    t: float


# ---------------------------------------------------------------------------
# Characteristic ODEs (independent oracle for the closed forms)
# ---------------------------------------------------------------------------

def characteristic_p_closed(params: FlowParams, p0: float, t: float) -> float:
    """Closed-form characteristic position p(t) starting from p0."""
    emt = math.exp(-2.0 * t)
    denom = 1.0 + p0 - p0 * emt
    if denom <= 0.0:
        raise BlowUpError(
            f"characteristic from p0={p0} blows up before t={t}"
        )
    if params.flavor is Flavor.CRITICAL:
        return p0 * emt / denom
    return p0 / denom


def _char_rhs(params: FlowParams, t: float, p: float, V: float):
    if params.flavor is Flavor.CRITICAL:
        return -2.0 * p * (1.0 + p), -1.0 + (6.0 + 4.0 * p) * V
    emt = math.exp(-2.0 * t)
    return -2.0 * emt * p * p, -emt + (4.0 + 4.0 * emt * p) * V


def characteristics_oracle(params: FlowParams, p0: float, t_end: float,
                           steps: int) -> CharState:
    """Integrate the characteristic pair (p, V) with fixed-step RK4.

    Initial data V(0) = 1/(2 p0) + beta/(4 p0^2).  Fixed step keeps the
    O(h^4) error scaling itself testable.  Raises :class:`BlowUpError` if
    the trajectory leaves |p|, |V| < 1e12.
    """
    if steps < 100:
        raise DomainError(f"steps must be >= 100, got {steps}")
    if p0 == 0.0:
        raise DomainError("p0 = 0 is a pole of the initial data")
    if t_end < 0.0:
        raise DomainError(f"t_end must be nonnegative, got {t_end}")
    h = t_end / steps
    p = p0
    V = 1.0 / (2.0 * p0) + params.beta / (4.0 * p0 * p0)
    t = 0.0
    for _ in range(steps):
        k1p, k1v = _char_rhs(params, t, p, V)
        k2p, k2v = _char_rhs(params, t + h / 2, p + h / 2 * k1p, V + h / 2 * k1v)
        k3p, k3v = _char_rhs(params, t + h / 2, p + h / 2 * k2p, V + h / 2 * k2v)
        k4p, k4v = _char_rhs(params, t + h, p + h * k3p, V + h * k3v)
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        V += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t += h
        if abs(p) > _BLOWUP_LIMIT or abs(V) > _BLOWUP_LIMIT:
            raise BlowUpError(
                f"characteristic from p0={p0} exceeded 1e12 at t={t:.6g}"
            )
    return CharState(p=p, V=V, t=t_end)


# ---------------------------------------------------------------------------
# Turning point and spectral edge (shared with the geometry layer)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _turning_point_cached(beta: float, flavor: Flavor, t: float) -> float:
    params = FlowParams(beta, flavor, t)

    def dv(p):
        return eval_dv(params, p)

    # dv > 0 just left of the origin (dv ~ -beta/(2 p^3)); expand leftward
    # until dv < 0 to bracket the unique turning point.
    hi = -1e-6
    lo = -max(beta, 1.0)
    for _ in range(80):
        if dv(lo) < 0.0:
            break
        lo *= 2.0
    else:
        raise BracketError(
            f"no turning point of v found left of the origin at t={t}"
        )
    return brentq(dv, lo, hi, xtol=1e-14, rtol=8.9e-16)


def turning_point(params: FlowParams) -> float:
    """Location -l(t) < 0 where v_p(t, -l(t)) = 0.

    v(t, .) is monotone increasing on (-l(t), 0) and decreasing left of it;
    the principal branch of the inverse lives on (-l(t), 0).
    """
    return _turning_point_cached(params.beta, params.flavor, params.t)


def spectral_edge(params: FlowParams) -> float:
    """Edge d(t) > 0 of the support (-inf, -d(t)) of the zero measure.

    Defined by -d(t) = v(t, -l(t)), the minimum of v over the principal
    interval.
    """
    return -eval_v(params, turning_point(params))


# ---------------------------------------------------------------------------
# Principal-branch inversion
# ---------------------------------------------------------------------------

def _newton_solve(params: FlowParams, x: complex, p: complex, tol: float,
                  max_iter: int = 60):
    """Damped Newton iteration for v(t, p) = x from the seed p.

    Convergence is judged on the residual relative to the local scale
    max(1, |x|, |p v'(p)|); at large t the flow grows like e^{4t} and an
    absolute criterion would sit below the rounding floor.
    """
    for it in range(1, max_iter + 1):
        f = eval_v(params, p) - x
        df = eval_dv(params, p)
        scale = max(1.0, abs(x), abs(p * df))
        if abs(f) <= tol * scale:
            return p, abs(f), it
        if df == 0:
            raise ConvergenceError("Newton hit a critical point of v")
        step = f / df
        # trust region: near the branch point |v'| is small and a raw
        # Newton step can overshoot onto the secondary branch
        limit = 0.5 * (1.0 + abs(p))
        if abs(step) > limit:
            step *= limit / abs(step)
        trial = p - step
        halvings = 0
        while (trial == 0 or abs(trial) > 1e8) and halvings < 40:
            step /= 2.0
            trial = p - step
            halvings += 1
        p = trial
    f = eval_v(params, p) - x
    scale = max(1.0, abs(x), abs(p * eval_dv(params, p)))
    if abs(f) <= tol * scale:
        return p, abs(f), max_iter
    raise ConvergenceError(
        f"Newton failed to converge to tol={tol} (residual {abs(f):g})"
    )


def _solve_real(params: FlowParams, x: float, tol: float) -> InversionResult:
    ell = turning_point(params)
    edge = spectral_edge(params)
    if x <= -edge:
        raise DomainError(
            f"x = {x} is not above the branch point -d(t) = {-edge}"
        )

    def f(p):
        return eval_v(params, p) - x

    lo = ell * (1.0 - 1e-13)
    hi = -1e-12
    flo = f(lo)
    if flo > 0.0:
        # x is within rounding of the edge value; the root sits at the
        # turning point itself.
        root = ell
    else:
        root = brentq(f, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)
    # brentq stops on the p-interval; polish where |v'| amplifies that into
    # a residual in v.  Convergence is relative to max(1, |x|, |p v'|),
    # matching the rounding floor of the closed-form evaluation.
    for _ in range(4):
        residual = abs(f(root))
        df = eval_dv(params, root)
        scale = max(1.0, abs(x), abs(root * df))
        if residual <= tol * scale or df == 0.0:
            break
        root -= f(root) / df
    residual = abs(f(root))
    scale = max(1.0, abs(x), abs(root * eval_dv(params, root)))
    if residual > tol * scale:
        raise ConvergenceError(
            f"bracketing left residual {residual:g} > tol {tol:g} "
            f"(scale {scale:g})"
        )
    if root < ell:
        raise OffBranchError(
            f"solution {root} lies left of the turning point {ell}"
        )
    return InversionResult(pbar=root, residual=residual,
                           method=InversionMethod.BISECTION, iterations=0)


def solve_pbar(params: FlowParams, x, tol: float = 1e-10) -> InversionResult:
    """Solve v(t, p) = x on the principal (regular-at-origin) branch.

    Real x above the branch point -d(t) is solved by monotone bracketing on
    (-l(t), 0); complex x by Newton continuation in t from the closed-form
    inverse at t = 0, which keeps the iterate on the branch that continues
    u0' without global root classification.
    """
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError(f"x must be finite, got {x}")
    if x.imag == 0.0:
        return _solve_real(params, x.real, tol)

    p = complex(u0_prime(x, params.beta))
    total_iters = 0
    t_cur = 0.0
    dt = 0.1
    while t_cur < params.t:
        t_next = min(t_cur + dt, params.t)
        stage = FlowParams(params.beta, params.flavor, t_next)
        try:
            p_new, _, its = _newton_solve(stage, x, p, tol)
        except ConvergenceError:
            dt /= 2.0
            if dt < 1e-6:
                raise ConvergenceError(
                    f"continuation stalled at t={t_cur:.6g} towards {params.t}"
                )
            continue
        # branch-jump guards: the principal branch varies continuously and,
        # since v has real coefficients, keeps Im pbar on the same side of
        # the real axis as Im x.  A long jump or a half-plane crossing
        # signals capture by the secondary branch.
        jumped = abs(p_new - p) > 0.5 * (1.0 + abs(p))
        crossed = (x.imag > 0.0 and p_new.imag <= 0.0) or (
            x.imag < 0.0 and p_new.imag >= 0.0
        )
        if (jumped or crossed) and dt > 1e-5:
            dt /= 2.0
            continue
        if crossed and dt <= 1e-5:
            raise OffBranchError(
                f"continuation left the principal half plane at t={t_cur:.6g}"
            )
        p = p_new
        total_iters += its
        t_cur = t_next
    residual = abs(eval_v(params, p) - x)
    return InversionResult(pbar=p, residual=residual,
                           method=InversionMethod.NEWTON,
                           iterations=total_iters)


def invert_contour(params: FlowParams, z, center, radius: float,
                   nodes: int = 64) -> complex:
    """Inverse of v by the argument-principle contour integral.

    Computes ``(1/2 pi i) oint eta v'(eta) / (v(eta) - z) d eta`` over the
    circle |eta - center| = radius with the trapezoidal rule (spectrally
    accurate for analytic integrands), doubling the node count until two
    successive values agree to 1e-10.  Raises :class:`ContainmentError`
    unless the winding number of v - z about the circle is exactly 1.
    """
    z = complex(z)
    center = complex(center)
    if radius <= 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    if nodes < 8:
        raise DomainError(f"nodes must be >= 8, got {nodes}")
    # the log branch cut of v sits on the positive real axis; reject discs
    # that touch it (or the pole-free requirement is hopeless anyway)
    slope = (math.expm1(2.0 * params.t)
             if params.flavor is Flavor.CRITICAL
             else -math.expm1(-2.0 * params.t))
    if slope > 0.0 and abs(center.imag) < radius:
        reach = center.real + math.sqrt(radius**2 - center.imag**2)
        if reach >= 1.0 / slope:
            raise DomainError(
                "contour disc intersects the branch cut of v on the "
                "positive real axis"
            )

    prev = None
    n = nodes
    while n <= 4096:
        theta = 2.0 * math.pi * np.arange(n) / n
        eta = center + radius * np.exp(1j * theta)
        v = np.array([eval_v(params, e) for e in eta])
        dv = np.array([eval_dv(params, e) for e in eta])
        deta = 1j * (eta - center)  # d eta / d theta
        denom = v - z
        if np.any(np.abs(denom) < 1e-14):
            raise ContainmentError("a solution of v = z lies on the contour")
        # (1/2 pi i) oint f d eta = (1/(i n)) sum f (d eta / d theta)
        winding = np.sum(dv / denom * deta) / (1j * n)
        wind_int = round(winding.real)
        if abs(winding - wind_int) > 1e-6 and prev is None:
            n *= 2
            continue
        if wind_int != 1:
            raise ContainmentError(
                f"winding number of v - z about the contour is {wind_int}, "
                "expected exactly 1"
            )
        value = np.sum(eta * dv / denom * deta) / (1j * n)
        if prev is not None and abs(value - prev) < 1e-10:
            return complex(value)
        prev = value
        n *= 2
    raise ConvergenceError(
        "contour integral failed to stabilize to 1e-10 within 4096 nodes"
    )


# ---------------------------------------------------------------------------
# Cumulant generator u(t, x)
# ---------------------------------------------------------------------------

def _adaptive_simpson(f, a: float, b: float, tol: float, depth: int = 28):
    """Adaptive Simpson quadrature of a complex-valued f on [a, b] in R."""
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth <= 0 or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth - 1))

    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return recurse(a, b, fa, fm, fb, whole, tol, depth)


def u_of_x(params: FlowParams, x, tol: float = 1e-10):
    """Cumulant generator ``u(t, x) = int_0^x pbar(t, x') dx'``.

    Straight-line path from the origin; u(t, 0) = 0 exactly.  The path must
    stay on the principal branch: real x must exceed -d(t), complex x is
    integrated along the segment (which misses the cut on the negative real
    axis whenever x is off it).
    """
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError(f"x must be finite, got {x}")
    if x == 0:
        return 0.0
    if x.imag == 0.0:
        edge = spectral_edge(params)
        if x.real <= -edge:
            raise DomainError(
                f"path from 0 to {x.real} crosses the branch point -d(t) = "
                f"{-edge}"
            )

        def f(s):
            return solve_pbar(params, s * x.real, tol=1e-10).pbar

        return x.real * _adaptive_simpson(f, 0.0, 1.0, tol / max(abs(x), 1.0))

    def f(s):
        return solve_pbar(params, s * x, tol=1e-10).pbar

    return x * _adaptive_simpson(f, 0.0, 1.0, tol / max(abs(x), 1.0))


# ---------------------------------------------------------------------------
# Asymptotics and thermodynamic relations
# ---------------------------------------------------------------------------

def pbar_asymptotic_critical(t: float, z) -> complex:
    """Two-term large-t form of the critical branch: -1 - (1/2t)(1/2 - z)."""
    if t < 1.0:
        raise DomainError(f"asymptotic form requires t >= 1, got {t}")
    z = complex(z)
    value = -1.0 - (0.5 - z) / (2.0 * t)
    if z.imag == 0.0:
        return value.real
    return value


def pbar_asymptotic_normal(t: float, beta: float) -> float:
    """Two-term large-t form of the normal branch: ``phat (1 + phat e^{-2t})``.

    The first-order perturbation of the plateau equation around phat has
    coefficient -B1(phat)/B0'(phat); using ln(1 - phat) = -phat (1 - beta/4)
    both numerator and denominator collapse and the coefficient is exactly
    phat.  The remainder is O(e^{-4t}) and is where the argument x first
    enters.
    """
    if not 0.0 < beta < 4.0:
        raise DomainError(f"beta must be in (0, 4), got {beta}")
    if t < 1.0:
        raise DomainError(f"asymptotic form requires t >= 1, got {t}")
    phat = phat_of_beta(beta)
    return phat * (1.0 + phat * math.exp(-2.0 * t))


def mu_of_beta(beta: float) -> float:
    """Chemical potential mu(beta) < 0 of the spherical model, 0 < beta < 4.

    Unique solution of ``1 - beta/4 = -2 mu ln(1 - 1/(2 mu))``; bracketing
    followed by Newton polish to residual < 1e-12.
    """
    if not 0.0 < beta < 4.0:
        raise DomainError(f"beta must be in (0, 4), got {beta}")
    target = 1.0 - beta / 4.0

    def f(mu):
        return -2.0 * mu * math.log1p(-1.0 / (2.0 * mu)) - target

    lo, hi = -1.0, -1e-15
    while f(lo) < 0.0:
        lo *= 4.0
        if lo < -1e18:
            raise ConvergenceError("failed to bracket mu(beta)")
    mu = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    for _ in range(4):
        r = f(mu)
        if abs(r) < 1e-13:
            break
        # f'(mu) = -2 ln(1 - 1/(2 mu)) - 1/(mu - 1/2) ... derivative of
        # -2 mu ln(1 - 1/(2 mu))
        df = -2.0 * math.log1p(-1.0 / (2.0 * mu)) - 1.0 / (mu - 0.5)
        mu -= r / df
    if abs(f(mu)) > 1e-12:
        raise ConvergenceError(f"mu(beta) residual {abs(f(mu)):g} > 1e-12")
    return mu


def phat_of_beta(beta: float) -> float:
    """Large-t plateau phat(beta) <= 0 of the normal branch, 0 <= beta < 4.

    Unique solution of ``1 - beta/4 = -(1/p) ln(1 - p)``; phat(0) = 0 and
    the identity phat = 1/(2 mu(beta)) holds.
    """
    if not 0.0 <= beta < 4.0:
        raise DomainError(f"beta must be in [0, 4), got {beta}")
    if beta == 0.0:
        return 0.0
    target = 1.0 - beta / 4.0

    def f(p):
        return -math.log1p(-p) / p - target

    hi = -1e-15
    lo = -1.0
    while f(lo) > 0.0:
        lo *= 4.0
        if lo < -1e18:
            raise ConvergenceError("failed to bracket phat(beta)")
    phat = brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    if abs(f(phat)) > 1e-12:
        raise ConvergenceError(f"phat(beta) residual {abs(f(phat)):g} > 1e-12")
    return phat
