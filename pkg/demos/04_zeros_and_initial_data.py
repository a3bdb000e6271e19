"""Zero density along the flow and the finite-N initial data.

The boundary arc of the image domain carries a density of partition-
function zeros rho(t, lambda) = h(t, p)/pi under lambda = v(t, p + i h).
At t = 0 it reduces to the scaled initial spectral density
rho0(lambda) = sqrt(-4 lambda - 1)/(4 pi |lambda|) on lambda < -1/4.
The initial data itself is the N -> infinity limit of a Bessel-function
continued fraction; the limit derivative u0' is a Pick function whose
boundary values recover rho0.
"""

import math

import numpy as np

from rgflow import (
    f0_stieltjes,
    rho_initial,
    theta_prime_n,
    u0_prime,
    zero_density,
)

# ---------------------------------------------------------------------
# Zero density: reduction at t = 0 and motion of the support edge.
# ---------------------------------------------------------------------
zm = zero_density(0.0, 64)
worst = max(abs(rho - 4.0 * rho_initial(4.0 * lam))
            for lam, rho in zm.samples)
print(f"t = 0 zero density vs scaled rho0: max deviation = {worst:.3e}")

print("support edge -d(t) of the zero measure")
for t in (0.0, 1.0, 2.0, 4.0):
    zm = zero_density(t, 48)
    assert np.all(zm.samples[:, 1] >= 0.0)
    print(f"  t = {t:g}: edge at lambda = {-zm.edge:.6f}")

# ---------------------------------------------------------------------
# The Stieltjes transform f0 of rho0: f0(0) = -1/2, and its imaginary
# part just above the cut recovers the density.
# ---------------------------------------------------------------------
print(f"\nf0(0) = {f0_stieltjes(0.0):.10f}  (exact -1/2)")
lam = -0.8
recovered = f0_stieltjes(lam + 1e-8j).imag / math.pi
print(f"Im f0({lam} + i 1e-8)/pi = {recovered:.8f}, "
      f"rho0({lam}) = {rho_initial(lam):.8f}")

# ---------------------------------------------------------------------
# Finite-N initial data theta_N'(x) from the Bessel continued fraction,
# converging to the closed-form limit u0'(x) at rate 1/N.
# ---------------------------------------------------------------------
x, beta = 0.03, 4.0
limit = u0_prime(x, beta)
print(f"\ntheta_N'({x}) -> u0'({x}) = {limit:.10f}")
prev = None
for n in (50, 100, 200, 400):
    err = abs(theta_prime_n(n, x, beta) - limit)
    ratio = "" if prev is None else f"   ratio {prev / err:.2f} (expect ~2)"
    print(f"  N = {n:3d}: |error| = {err:.3e}{ratio}")
    prev = err

# ---------------------------------------------------------------------
# Pick property: both the finite-N and limit derivatives map the upper
# half plane into itself.
# ---------------------------------------------------------------------
pts = [complex(r * math.cos(th), r * math.sin(th))
       for r in (0.01, 0.1, 1.0, 5.0)
       for th in np.linspace(0.2, math.pi - 0.2, 7)]
ok_limit = all(u0_prime(z, beta).imag > 0.0 for z in pts)
pts_n = [z / 90.0 for z in pts]  # inside the finite-N convergence domain
ok_n = all(theta_prime_n(50, z, beta).imag > 0.0 for z in pts_n)
print(f"\nIm u0' > 0 on a 28-point UHP grid: {ok_limit}")
print(f"Im theta_50' > 0 on a scaled grid:  {ok_n}")
