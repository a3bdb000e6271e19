"""Exactly solved scaling flow of the d=4 hierarchical spherical model.

The library evaluates the closed-form flow ``v(t, p)`` and its analytic
derivatives for both scaling flavors, inverts the flow onto the principal
branch ``pbar(t, x)``, integrates the cumulant generator ``u(t, x)``,
solves the thermodynamic relations, and computes the conformal domain
geometry (boundary curves, zero densities, fixed points) of the critical
flow.  The ``rgflow`` console script exposes all of it on the command
line.
"""

__version__ = "0.1.0"

from .errors import (
    BlowUpError,
    BracketError,
    BranchCutError,
    ContainmentError,
    ConvergenceError,
    DomainError,
    OffBranchError,
    RGFlowError,
    SingularityError,
)
from .flow import (
    Flavor,
    FlowParams,
    eval_dv,
    eval_dv_dt,
    eval_f,
    eval_g_critical,
    eval_g_normal,
    eval_v,
)
from .geometry import (
    DomainBoundary,
    FixedPointSet,
    Regime,
    ZeroMeasure,
    alpha_of_t,
    boundary_curve,
    domain_contains,
    edge_of_t,
    fixed_points,
    t_crossover,
    t_star,
    zero_density,
)
from .initial import (
    bessel_ratio_cf,
    f0_stieltjes,
    rho_initial,
    theta_prime_n,
    u0_eval,
    u0_prime,
)
from .invert import (
    CharState,
    InversionMethod,
    InversionResult,
    characteristic_p_closed,
    characteristics_oracle,
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
