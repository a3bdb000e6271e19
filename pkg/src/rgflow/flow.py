"""Closed-form scaling-flow solutions and their derivatives.

The scale-dependent function ``v(t, .)`` solves a first-order transport
equation obtained from the Legendre transform of the cumulant-generator flow
of the d=4 hierarchical spherical model.  Two scaling flavors exist:

* ``Flavor.CRITICAL`` (block exponent gamma = 6): evolution
  ``v_t - 2p(1+p) v_p = -1 + (6+4p) v``,
* ``Flavor.NORMAL`` (gamma = 4): evolution
  ``v_t - 2 p^2 e^{-2t} v_p = -e^{-2t} + (4 + 4 e^{-2t} p) v``,

both with initial value ``v(0,p) = 1/(2p) + beta/(4 p^2)``.

Everything here is a pure scalar function; complex arguments use the
principal branch of the logarithm (cut on the nonpositive reals of its
argument), which keeps ``v`` real on the real segment left of the branch
point.  Near ``p = 0`` the closed forms suffer 1/p^3-scale cancellations, so
evaluation switches to an analytically cancelled Maclaurin expansion.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import BranchCutError, DomainError, SingularityError

__all__ = [
    "Flavor",
    "FlowParams",
    "eval_f",
    "eval_g_critical",
    "eval_g_normal",
    "eval_v",
    "eval_dv",
    "eval_dv_dt",
]

# Switch to the cancelled series once |p * (e^{2t}-1)| (critical) or
# |p * (1-e^{-2t})| (normal) falls below this; keeps ~12 significant digits
# where the naive closed form loses all precision.
_SERIES_THRESHOLD = 1e-3

# Beyond this, e^{2t} overflows a double and the critical flavor switches to
# a log-domain rearrangement ln(1 + p - p e^{2t}) = 2t + ln(e^{-2t}(1+p) - p).
_LOG_DOMAIN_2T = 690.0


class Flavor(enum.Enum):
    """Scaling flavor of the block-spin normalization."""

    CRITICAL = "critical"  # gamma = d + 2 = 6, beta at the critical value
    NORMAL = "normal"      # gamma = d = 4, beta below the critical value


@dataclass(frozen=True)
class FlowParams:
    """Physical parameters of one flow evaluation.

    Attributes
    ----------
    beta : float
        Inverse temperature, > 0.  The critical-flavor limit theorems hold
        at beta = 4 (the d=4 critical value), the normal-flavor ones for
        0 < beta < 4, but evaluation is defined for any beta > 0.
    flavor : Flavor
        Scaling flavor.
    t : float
        Scale parameter, >= 0.
    """

    beta: float
    flavor: Flavor
    t: float

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta <= 0.0:
            raise DomainError(f"beta must be positive and finite, got {self.beta}")
        if not math.isfinite(self.t) or self.t < 0.0:
            raise DomainError(f"t must be nonnegative and finite, got {self.t}")
        if not isinstance(self.flavor, Flavor):
            raise DomainError(f"flavor must be a Flavor, got {self.flavor!r}")


def _check_finite(z, name="argument"):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must have finite components, got {z}")
    return z


def _as_input_type(value: complex, arg: complex):
    """Return a float when the input was real, else the complex value."""
    if arg.imag == 0.0:
        return value.real
    return value


def eval_f(w: float) -> float:
    """Evaluate ``f(w) = ln(1-w) + 1/(1-w) - 1`` for w < 1.

    ``f`` is nonnegative with a single zero at w = 0; it controls the strict
    monotonicity of the auxiliary functions :func:`eval_g_critical` and
    :func:`eval_g_normal`.
    """
    if not math.isfinite(w):
        raise DomainError(f"w must be finite, got {w}")
    if w >= 1.0:
        raise DomainError(f"f(w) requires w < 1, got {w}")
    return math.log1p(-w) + 1.0 / (1.0 - w) - 1.0


def eval_g_critical(t: float, p: float) -> float:
    """Monotone auxiliary ``g(t,p) = -((1+p)/p) ln(1 + p - p e^{2t})``.

    Strictly increasing in p on ``p < (e^{2t}-1)^{-1}``, with
    ``g(t,-1) = 0`` and the limit value ``g(t,0) = e^{2t} - 1``.
    """
    if not (math.isfinite(t) and math.isfinite(p)):
        raise DomainError("t and p must be finite")
    if t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t}")
    w = math.expm1(2.0 * t)
    if p == 0.0:
        return w
    arg = 1.0 - p * w
    if arg <= 0.0:
        raise DomainError(
            f"g(t,p) undefined: 1 - p(e^(2t)-1) = {arg} <= 0 at t={t}, p={p}"
        )
    return -((1.0 + p) / p) * math.log1p(-p * w)


def eval_g_normal(t: float, p: float, beta: float) -> float:
    """Monotone auxiliary ``g1(t,p) = -1 + beta/4 - (e^{-2t} - 1/p) ln(1 - p + p e^{-2t})``.

    Strictly increasing in p on ``p < (1 - e^{-2t})^{-1}``, with the limit
    value ``g1(t,0) = -e^{-2t} + beta/4``.
    """
    if not (math.isfinite(t) and math.isfinite(p) and math.isfinite(beta)):
        raise DomainError("t, p and beta must be finite")
    if t < 0.0:
        raise DomainError(f"t must be nonnegative, got {t}")
    emt = math.exp(-2.0 * t)
    s = -math.expm1(-2.0 * t)  # 1 - e^{-2t}
    if p == 0.0:
        return -emt + beta / 4.0
    arg = 1.0 - p * s
    if arg <= 0.0:
        raise DomainError(
            f"g1(t,p) undefined: 1 - p(1-e^(-2t)) = {arg} <= 0 at t={t}, p={p}"
        )
    return -1.0 + beta / 4.0 - (emt - 1.0 / p) * math.log1p(-p * s)


def _log_argument(eta: complex, slope: float) -> complex:
    """Principal-branch argument ``1 - eta * slope`` with cut detection."""
    arg = 1.0 - eta * slope
    if arg.imag == 0.0 and arg.real <= 0.0:
        raise BranchCutError(
            f"log argument {arg.real} is a nonpositive real (eta={eta})"
        )
    return arg


# ---------------------------------------------------------------------------
# Critical flavor: v(t,p) = 1/(2p) + 1/p^2 - ((4-beta)/4) e^{2t}/p^2
#                           - ((1+p)/p^3) ln(1 + p - p e^{2t})
# ---------------------------------------------------------------------------

def _log_domain_parts(beta: float, t: float, eta: complex):
    """Pieces of the critical flavor valid when e^{2t} overflows.

    Returns (C, log_term, growth) with C = e^{-2t}(1 + eta) - eta, the
    principal log ln(1 + eta - eta e^{2t}) = 2t + ln(C), and the term
    ((4-beta)/4) e^{2t} which is zero at beta = 4 and overflows otherwise.
    """
    emt = math.exp(-2.0 * t)
    c = emt * (1.0 + eta) - eta
    if c.imag == 0.0 and c.real <= 0.0:
        raise BranchCutError(
            f"log argument is a nonpositive real (eta={eta}, t={t})"
        )
    log_term = 2.0 * t + cmath.log(c)
    if beta == 4.0:
        growth = 0.0
    else:
        growth = ((4.0 - beta) / 4.0) * math.exp(2.0 * t)  # OverflowError
    return c, log_term, growth


def _v_critical(beta: float, t: float, eta: complex) -> complex:
    if 2.0 * t > _LOG_DOMAIN_2T:
        c, log_term, growth = _log_domain_parts(beta, t, eta)
        return (
            1.0 / (2.0 * eta)
            + 1.0 / eta**2
            - growth / eta**2
            - (1.0 + eta) * log_term / eta**3
        )
    w = math.expm1(2.0 * t)
    if abs(eta) * w < _SERIES_THRESHOLD:
        return _v_critical_series(beta, w, eta)
    arg = _log_argument(eta, w)
    log_term = cmath.log(arg)
    e2t = 1.0 + w
    return (
        1.0 / (2.0 * eta)
        + 1.0 / eta**2
        - ((4.0 - beta) / 4.0) * e2t / eta**2
        - (1.0 + eta) * log_term / eta**3
    )


def _v_critical_series(beta: float, w: float, eta: complex) -> complex:
    # Maclaurin expansion with the 1/p^3 cancellations performed analytically;
    # valid (12+ digits) for |eta*w| below the threshold.
    e2t = 1.0 + w
    acc = beta * e2t / (4.0 * eta**2) + e2t**2 / (2.0 * eta)
    term = 1.0
    for m in range(0, 6):
        acc += term * (w ** (m + 3) / (m + 3) + w ** (m + 2) / (m + 2))
        term *= eta
    return acc


def _dv_critical(beta: float, t: float, eta: complex) -> complex:
    if 2.0 * t > _LOG_DOMAIN_2T:
        c, log_term, growth = _log_domain_parts(beta, t, eta)
        # w / (1 + eta - eta e^{2t}) = (1 - e^{-2t}) / C, finite at large t
        w_over_arg = -math.expm1(-2.0 * t) / c
        return (
            -1.0 / (2.0 * eta**2)
            - 2.0 / eta**3
            + 2.0 * growth / eta**3
            + (2.0 * eta + 3.0) * log_term / eta**4
            + (1.0 + eta) * w_over_arg / eta**3
        )
    w = math.expm1(2.0 * t)
    if abs(eta) * w < _SERIES_THRESHOLD:
        return _dv_critical_series(beta, w, eta)
    arg = _log_argument(eta, w)
    log_term = cmath.log(arg)
    e2t = 1.0 + w
    return (
        -1.0 / (2.0 * eta**2)
        - 2.0 / eta**3
        + ((4.0 - beta) / 2.0) * e2t / eta**3
        + (2.0 * eta + 3.0) * log_term / eta**4
        + (1.0 + eta) * w / (eta**3 * arg)
    )


def _dv_critical_series(beta: float, w: float, eta: complex) -> complex:
    e2t = 1.0 + w
    acc = -beta * e2t / (2.0 * eta**3) - e2t**2 / (2.0 * eta**2)
    term = 1.0
    for m in range(1, 6):
        acc += m * term * (w ** (m + 3) / (m + 3) + w ** (m + 2) / (m + 2))
        term *= eta
    return acc


def _dvdt_critical(beta: float, t: float, eta: complex) -> complex:
    if 2.0 * t > _LOG_DOMAIN_2T:
        c, _, growth = _log_domain_parts(beta, t, eta)
        # e^{2t} / (1 + eta - eta e^{2t}) = 1 / C, finite at large t
        return -2.0 * growth / eta**2 + 2.0 * (1.0 + eta) / (eta**2 * c)
    w = math.expm1(2.0 * t)
    e2t = 1.0 + w
    if abs(eta) * w < _SERIES_THRESHOLD:
        acc = beta * e2t / (2.0 * eta**2) + 2.0 * e2t**2 / eta
        term = 1.0
        for m in range(0, 6):
            acc += 2.0 * e2t * term * (w ** (m + 2) + w ** (m + 1))
            term *= eta
        return acc
    arg = _log_argument(eta, w)
    return -((4.0 - beta) / 2.0) * e2t / eta**2 + 2.0 * e2t * (1.0 + eta) / (
        eta**2 * arg
    )


# ---------------------------------------------------------------------------
# Normal flavor: v(t,p) = -(e^{4t}/p^2) * B(t,p) with
#   B = 1 - beta/4 + (1/p + e^{-2t}) ln(1 - p + p e^{-2t})
#       - e^{-2t} - (p/2) e^{-4t}
# ---------------------------------------------------------------------------

def _v_normal(beta: float, t: float, eta: complex) -> complex:
    s = -math.expm1(-2.0 * t)  # 1 - e^{-2t}
    if abs(eta) * s < _SERIES_THRESHOLD:
        return _v_normal_series(beta, s, t, eta)
    arg = _log_argument(eta, s)
    log_term = cmath.log(arg)
    emt = math.exp(-2.0 * t)
    b = (
        1.0
        - beta / 4.0
        + (1.0 / eta + emt) * log_term
        - emt
        - (eta / 2.0) * emt**2
    )
    return -math.exp(4.0 * t) * b / eta**2


def _normal_gamma(s: float, m: int) -> float:
    return s ** (m + 3) / (m + 3) + (1.0 - s) * s ** (m + 2) / (m + 2)


def _v_normal_series(beta: float, s: float, t: float, eta: complex) -> complex:
    scale = math.exp(4.0 * t)
    acc = beta / (4.0 * eta**2) + 1.0 / (2.0 * eta)
    term = 1.0
    for m in range(0, 6):
        acc += term * _normal_gamma(s, m)
        term *= eta
    return scale * acc


def _dv_normal(beta: float, t: float, eta: complex) -> complex:
    s = -math.expm1(-2.0 * t)
    if abs(eta) * s < _SERIES_THRESHOLD:
        scale = math.exp(4.0 * t)
        acc = -beta / (2.0 * eta**3) - 1.0 / (2.0 * eta**2)
        term = 1.0
        for m in range(1, 6):
            acc += m * term * _normal_gamma(s, m)
            term *= eta
        return scale * acc
    arg = _log_argument(eta, s)
    log_term = cmath.log(arg)
    emt = math.exp(-2.0 * t)
    b = (
        1.0
        - beta / 4.0
        + (1.0 / eta + emt) * log_term
        - emt
        - (eta / 2.0) * emt**2
    )
    b_p = (
        -log_term / eta**2
        - (1.0 / eta + emt) * s / arg
        - emt**2 / 2.0
    )
    return math.exp(4.0 * t) * (2.0 * b / eta**3 - b_p / eta**2)


def _dvdt_normal(beta: float, t: float, eta: complex) -> complex:
    s = -math.expm1(-2.0 * t)
    emt = math.exp(-2.0 * t)
    if abs(eta) * s < _SERIES_THRESHOLD:
        v = _v_normal_series(beta, s, t, eta)
        scale = math.exp(4.0 * t)
        acc = 0.0 + 0.0j
        term = 1.0
        for m in range(0, 6):
            dgamma_ds = (
                s ** (m + 2)
                - s ** (m + 2) / (m + 2)
                + (1.0 - s) * s ** (m + 1)
            )
            acc += term * dgamma_ds
            term *= eta
        return 4.0 * v + scale * 2.0 * emt * acc
    arg = _log_argument(eta, s)
    log_term = cmath.log(arg)
    b = (
        1.0
        - beta / 4.0
        + (1.0 / eta + emt) * log_term
        - emt
        - (eta / 2.0) * emt**2
    )
    b_t = (
        -2.0 * emt * log_term
        - (1.0 / eta + emt) * 2.0 * eta * emt / arg
        + 2.0 * emt
        + 2.0 * eta * emt**2
    )
    v = -math.exp(4.0 * t) * b / eta**2
    return 4.0 * v - math.exp(4.0 * t) * b_t / eta**2


# ---------------------------------------------------------------------------
# Public dispatchers
# ---------------------------------------------------------------------------

def _dispatch(params: FlowParams, eta, crit_fn, norm_fn):
    eta = _check_finite(eta, "eta")
    if eta == 0:
        raise SingularityError("v(t, eta) has a pole at eta = 0")
    if params.flavor is Flavor.CRITICAL:
        value = crit_fn(params.beta, params.t, eta)
    else:
        value = norm_fn(params.beta, params.t, eta)
    return _as_input_type(value, eta)


def eval_v(params: FlowParams, eta):
    """Evaluate the flow solution ``v(t, eta)``.

    Real for real ``eta`` left of the branch point; complex ``eta`` uses the
    principal logarithm.  Raises :class:`SingularityError` at eta = 0 and
    :class:`BranchCutError` on the cut.
    """
    return _dispatch(params, eta, _v_critical, _v_normal)


def eval_dv(params: FlowParams, eta):
    """Analytic partial derivative ``dv/deta`` of :func:`eval_v`."""
    return _dispatch(params, eta, _dv_critical, _dv_normal)


def eval_dv_dt(params: FlowParams, eta):
    """Analytic partial derivative ``dv/dt`` of :func:`eval_v`.

    Exposed so that evolution-equation residuals can be formed without
    finite differencing in t, which loses too much precision at large t.
    """
    return _dispatch(params, eta, _dvdt_critical, _dvdt_normal)
