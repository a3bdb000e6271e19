"""Principal-branch inversion, the cumulant generator, and limit theorems.

Inverting x = v(t, p) on the principal branch gives pbar(t, x), the
derivative of the cumulant generator u(t, x).  This script inverts the
flow by three routes (bracketing, Newton continuation, contour integral),
builds u by quadrature, and exhibits the two limit theorems: the 1/(4t)
approach to the Gaussian point on the critical branch, and the e^{-2t}
approach to the plateau phat on the normal branch.
"""

import math

import numpy as np

from rgflow import (
    Flavor,
    FlowParams,
    eval_v,
    invert_contour,
    mu_of_beta,
    phat_of_beta,
    solve_pbar,
    u_of_x,
)

# ---------------------------------------------------------------------
# Real x: monotone bracketing.  Complex x: Newton continuation in t.
# Either way the root must reproduce x under the forward map.
# ---------------------------------------------------------------------
pr = FlowParams(4.0, Flavor.CRITICAL, 2.0)
print("round trips x -> pbar -> v(t, pbar)")
for x in (0.3, 2.0, 0.3 + 0.4j, -0.2 + 1.0j):
    r = solve_pbar(pr, x)
    print(f"  x = {x!s:>12}: pbar = {r.pbar:.12g} "
          f"({r.method.value}, residual {abs(eval_v(pr, r.pbar) - x):.1e})")

# The contour-integral route (argument principle) is an independent
# second opinion on one of the complex roots.
z = 0.3 + 0.4j
pb = solve_pbar(pr, z).pbar
pb_contour = invert_contour(pr, z, pb, 0.2)
print(f"\ncontour integral vs Newton at x = {z}: "
      f"|difference| = {abs(pb_contour - pb):.2e}")

# ---------------------------------------------------------------------
# The cumulant generator u(t, x) = int_0^x pbar(t, s) ds.  Its numerical
# derivative must return pbar.
# ---------------------------------------------------------------------
x, h = 0.4, 1e-6
num = (u_of_x(pr, x + h) - u_of_x(pr, x - h)) / (2.0 * h)
print(f"\nu'(2, {x}) by central difference: {num:.10f}")
print(f"pbar(2, {x}) directly:            {solve_pbar(pr, x).pbar:.10f}")

# ---------------------------------------------------------------------
# Gaussian limit of the critical flow: pbar(t, x) -> -1 with the
# universal correction -1/(4t) at x = 0, and u(t, x) -> -x.
# ---------------------------------------------------------------------
print("\ncritical branch: t * (pbar(t,0) + 1) -> -1/4")
for t in (10.0, 50.0, 250.0):
    prt = FlowParams(4.0, Flavor.CRITICAL, t)
    pb0 = solve_pbar(prt, 0.0).pbar.real
    print(f"  t = {t:5g}: t (pbar + 1) = {t * (pb0 + 1.0):+.5f}")

prt = FlowParams(4.0, Flavor.CRITICAL, 50.0)
worst = max(abs(u_of_x(prt, float(s)) + float(s))
            for s in np.linspace(-0.05, 1.0, 22))
print(f"  max |u(50, x) + x| on [-0.05, 1] = {worst:.3e}")

# ---------------------------------------------------------------------
# Normal branch: pbar(t, 0) -> phat exponentially fast, where phat < 0
# solves the plateau equation 1 - beta/4 = -(1/phat) ln(1 - phat) and
# equals 1/(2 mu) with mu from the saturation relation.  The measured
# relative first-order coefficient converges to phat itself:
# pbar = phat (1 + phat e^{-2t}) + O(e^{-4t}).
# ---------------------------------------------------------------------
print("\nnormal branch at beta = 2")
beta = 2.0
phat = phat_of_beta(beta)
mu = mu_of_beta(beta)
print(f"  phat = {phat:.12f},  1/(2 mu) = {1.0 / (2.0 * mu):.12f}")
print("  e^{2t} (pbar/phat - 1):")
for t in (3.0, 5.0, 7.0):
    prn = FlowParams(beta, Flavor.NORMAL, t)
    pb = solve_pbar(prn, 0.0).pbar.real
    coeff = (pb / phat - 1.0) * math.exp(2.0 * t)
    print(f"    t = {t:g}: {coeff:+.8f}   (phat = {phat:+.8f})")
