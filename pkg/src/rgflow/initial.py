"""Initial data of the spherical-model flow.

At scale t = 0 the cumulant-generator derivative of the block variable is a
Bessel-function ratio at finite block dimension N and a simple algebraic Pick
function in the N -> infinity limit:

* ``theta_prime_n``  -- finite-N derivative via a Gauss continued fraction,
* ``u0_prime``       -- its limit  -beta / (1 + sqrt(1 + 4 beta zeta)),
* ``u0_eval``        -- the antiderivative normalized to vanish at 0,
* ``rho_initial``    -- the Lee-Yang spectral density of the initial measure,
* ``f0_stieltjes``   -- numerical Stieltjes transform of that density.

The continued fraction converges uniformly on the Worpitzky disc
``|xi|^2 <= nu (nu + 1)``; outside it evaluation is still offered but must be
requested explicitly (``extended=True``).
"""

from __future__ import annotations

import cmath
import math

from scipy.integrate import quad

from .errors import BranchCutError, ConvergenceError, DomainError

__all__ = [
    "bessel_ratio_cf",
    "theta_prime_n",
    "u0_prime",
    "u0_eval",
    "rho_initial",
    "f0_stieltjes",
]

# Hard ceiling on continued-fraction iterations; the nominal cap
# 10 (|xi|^2 + nu) grows quadratically in |xi| and is clamped here.
_CF_MAX_ITER = 500_000


def _cf_eval(numerators, cap, tol):
    """Evaluate b1/(1 - b2/(1 - b3/(...))) by forward convergents.

    ``numerators`` is a callable k -> b_k (k >= 1).  Stops when the relative
    change of successive convergents falls below ``tol``.
    """
    b1 = numerators(1)
    if b1 == 0:
        return 0.0 + 0.0j
    a_prev, b_prev = 0.0 + 0.0j, 1.0 + 0.0j  # convergent -1
    a_cur, b_cur = complex(b1), 1.0 + 0.0j   # convergent 1
    f_prev = a_cur / b_cur
    for k in range(2, cap + 1):
        bk = numerators(k)
        a_nxt = a_cur - bk * a_prev
        b_nxt = b_cur - bk * b_prev
        a_prev, b_prev, a_cur, b_cur = a_cur, b_cur, a_nxt, b_nxt
        if abs(b_cur) > 1e150 or (0 < abs(b_cur) < 1e-150):
            scale = 1.0 / abs(b_cur)
            a_prev *= scale
            b_prev *= scale
            a_cur *= scale
            b_cur *= scale
        if b_cur == 0:
            continue
        f_cur = a_cur / b_cur
        if abs(f_cur - f_prev) <= tol * max(abs(f_cur), 1e-300):
            return f_cur
        f_prev = f_cur
    raise ConvergenceError(
        f"continued fraction did not reach tol={tol} within {cap} iterations"
    )


def bessel_ratio_cf(nu: float, xi, tol: float = 1e-12, extended: bool = False):
    """Bessel-function ratio ``phi_nu(xi) = xi J_nu(xi) / J_{nu-1}(xi)``.

    Evaluated through the Gauss continued fraction generated by the
    three-term Bessel recursion; an even function of xi.

    Parameters
    ----------
    nu : float
        Order, >= 1.
    xi : complex
        Argument.  Guaranteed convergence on ``|xi|^2 <= nu (nu+1)``
        (Worpitzky); pass ``extended=True`` to evaluate outside that disc
        (the fraction still converges away from poles, but without the
        a-priori bound).
    tol : float
        Relative stopping tolerance on successive convergents.
    """
    if nu < 1.0:
        raise DomainError(f"order nu must be >= 1, got {nu}")
    xi = complex(xi)
    if not (math.isfinite(xi.real) and math.isfinite(xi.imag)):
        raise DomainError(f"xi must be finite, got {xi}")
    if xi == 0:
        return 0.0 + 0.0j
    xi2 = xi * xi
    if abs(xi2) > nu * (nu + 1.0) and not extended:
        raise DomainError(
            f"|xi|^2 = {abs(xi2):g} outside the Worpitzky disc "
            f"nu(nu+1) = {nu * (nu + 1):g}; pass extended=True to evaluate anyway"
        )

    def b(k):
        if k == 1:
            return xi2 / (2.0 * nu)
        return (xi2 / 4.0) / ((nu + k - 2.0) * (nu + k - 1.0))

    cap = min(int(10.0 * (abs(xi2) + nu)) + 100, _CF_MAX_ITER)
    return _cf_eval(b, cap, tol)


def theta_prime_n(n: int, x, beta: float, tol: float = 1e-12,
                  extended: bool = False):
    """Finite-N cumulant derivative ``theta_N'(x)``.

    Equals ``phi_{N/2}(i sqrt(beta x) N) / (2 N x)`` but is evaluated through
    a continued fraction whose coefficients are rational in ``beta x``, so no
    square root or branch choice enters.  The limit value at x = 0 is
    ``-beta/2``.  Guaranteed-convergence domain ``|4 beta x| <= 1``; pass
    ``extended=True`` outside it.
    """
    if n < 1:
        raise DomainError(f"N must be a positive integer, got {n}")
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError(f"x must be finite, got {x}")
    if x == 0:
        return complex(-beta / 2.0)
    if abs(4.0 * beta * x) > 1.0 and not extended:
        raise DomainError(
            f"|4 beta x| = {abs(4 * beta * x):g} > 1; pass extended=True "
            "to evaluate outside the guaranteed-convergence domain"
        )

    bx = beta * x

    def a(k):
        # partial numerators of 1 - a_0/(1 - a_1/(1 - ...)), shifted by one
        j = k - 1
        return -bx / ((1.0 + 2.0 * j / n) * (1.0 + (2.0 * j + 2.0) / n))

    cap = min(int(10.0 * (abs(bx) * n * n + n / 2.0)) + 100, _CF_MAX_ITER)
    tail = _cf_eval(a, cap, tol)
    return (-beta / 2.0) / (1.0 - tail)


def _principal_sqrt_shifted(zeta: complex, beta: float, boundary: bool):
    """sqrt(1 + 4 beta zeta) with the cut on (-inf, -1/(4 beta)]."""
    arg = 1.0 + 4.0 * beta * zeta
    if arg.imag == 0.0 and arg.real <= 0.0:
        if not boundary:
            raise BranchCutError(
                f"zeta = {zeta} lies on the branch cut (-inf, {-1/(4*beta)}]; "
                "request the boundary value explicitly"
            )
        # lambda + i0 boundary value: Im sqrt > 0
        return 1j * math.sqrt(-arg.real)
    return cmath.sqrt(arg)


def u0_prime(zeta, beta: float, boundary: bool = False):
    """Limit cumulant derivative ``u0'(zeta) = -beta / (1 + sqrt(1 + 4 beta zeta))``.

    A Pick function: maps the upper half-plane into itself, with
    ``u0'(0) = -beta/2``.  ``boundary=True`` returns the lambda + i0 boundary
    value on the cut (-inf, -1/(4 beta)].
    """
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    zeta = complex(zeta)
    if not (math.isfinite(zeta.real) and math.isfinite(zeta.imag)):
        raise DomainError(f"zeta must be finite, got {zeta}")
    s = _principal_sqrt_shifted(zeta, beta, boundary)
    value = -beta / (1.0 + s)
    if zeta.imag == 0.0 and s.imag == 0.0:
        return value.real
    return value


def u0_eval(zeta, beta: float):
    """Antiderivative ``u0(zeta) = int_0^zeta u0'(s) ds`` with u0(0) = 0.

    Closed form ``(1 - S)/2 + (1/2) ln((1+S)/2)`` with
    ``S = sqrt(1 + 4 beta zeta)``, obtained by the substitution
    ``s -> sqrt(1 + 4 beta s)`` and verified against quadrature in the tests.
    """
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    zeta = complex(zeta)
    if not (math.isfinite(zeta.real) and math.isfinite(zeta.imag)):
        raise DomainError(f"zeta must be finite, got {zeta}")
    s = _principal_sqrt_shifted(zeta, beta, boundary=False)
    value = (1.0 - s) / 2.0 + 0.5 * cmath.log((1.0 + s) / 2.0)
    if zeta.imag == 0.0 and s.imag == 0.0:
        return value.real
    return value


def rho_initial(lam: float, beta: float = 1.0) -> float:
    """Lee-Yang spectral density of the initial measure of ``u0'``.

    For the unit-transform density ``rho0(l) = sqrt(-4 l - 1) / (4 pi (-l))``
    on l < -1/4, the density associated with ``u0'(x) = beta f0(beta x)`` is
    ``beta rho0(beta lam)``, supported on ``beta lam < -1/4``.  Returns 0
    outside the support.
    """
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite, got {lam}")
    bl = beta * lam
    if bl >= -0.25:
        return 0.0
    return beta * math.sqrt(-4.0 * bl - 1.0) / (4.0 * math.pi * (-bl))


def f0_stieltjes(zeta, quad_tol: float = 1e-10):
    """Stieltjes transform ``f0(zeta) = int rho0(l) / (l - zeta) dl``.

    Numerical quadrature over the support (-inf, -1/4] of the unit density,
    through the substitution ``l = -(1 + s^2)/4`` which removes the
    square-root edge.  Satisfies ``u0'(x) = beta f0(beta x)``.
    """
    zeta = complex(zeta)
    if not (math.isfinite(zeta.real) and math.isfinite(zeta.imag)):
        raise DomainError(f"zeta must be finite, got {zeta}")
    if zeta.imag == 0.0 and zeta.real <= -0.25:
        raise BranchCutError(
            f"zeta = {zeta.real} lies on the support (-inf, -1/4]"
        )

    # In the substituted variable, -q/4 - zeta = -(s^2 - a^2)/4 with
    # a = sqrt(-1 - 4 zeta), so the integrand is N(s) * (-4)/(s^2 - a^2)
    # with the smooth part N(s) = s^2 / (2 pi (1 + s^2)).
    def smooth(s):
        q = 1.0 + s * s
        return s * s / (2.0 * math.pi * q)

    def integrand(s):
        return -4.0 * smooth(s) / (s * s - a_sq)

    a_sq = -1.0 - 4.0 * zeta
    a = cmath.sqrt(a_sq)
    if a.real < 0.0:
        a = -a

    near_pole = zeta.real < -0.25 and abs(zeta.imag) < 1e-3 and a.real > 1e-6
    if near_pole:
        # The pole at s = a sits within O(|Im zeta|) of the real axis; the
        # adaptive rule cannot resolve it, so subtract the simple-pole term
        # (-2 N(a)/a) / (s - a) on a window around Re(a) and integrate it
        # in closed form.
        s_res = a.real
        w = 0.5 * min(s_res, 1.0)
        s1, s2 = s_res - w, s_res + w
        coeff = -2.0 * smooth(a) / a

        def regular(s):
            return integrand(s) - coeff / (s - a)

        pole_part = coeff * (cmath.log(s2 - a) - cmath.log(s1 - a))
        v1, e1 = quad(integrand, 0.0, s1, epsabs=quad_tol,
                      epsrel=quad_tol, limit=200, complex_func=True)
        v2, e2 = quad(regular, s1, s2, epsabs=quad_tol,
                      epsrel=quad_tol, limit=200, complex_func=True)
        v3, e3 = quad(integrand, s2, math.inf, epsabs=quad_tol,
                      epsrel=quad_tol, limit=200, complex_func=True)
        value = v1 + (v2 + pole_part) + v3
        err = abs(e1) + abs(e2) + abs(e3)
    else:
        value, err = quad(integrand, 0.0, math.inf, epsabs=quad_tol,
                          epsrel=quad_tol, limit=200, complex_func=True)
    if abs(err) > 10.0 * max(quad_tol, 1e-14) * max(1.0, abs(value)):
        raise ConvergenceError(
            f"Stieltjes quadrature error estimate {abs(err):g} exceeds "
            f"tolerance {quad_tol:g}"
        )
    if zeta.imag == 0.0:
        return value.real
    return value
