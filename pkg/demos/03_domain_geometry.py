"""Image-domain geometry of the critical flow: boundary arcs, turning
point, fixed points, and the two distinguished scales.

The principal branch maps the upper half plane onto a shrinking family
of domains Omega_t whose boundary arc q = h(t, p) starts as a semicircle
of radius 2 and converges (at rate ~1/t) to the upper half of the folium
h*(p)^2 = (3p^2 + 2p^3)/(1 - 2p) over [-3/2, 0].  The fixed points of
p -> v(t, p) collide on the real axis at t* ~ 5.155 and the smaller one
crosses the segment endpoint -alpha(t) at the crossover scale t_co.
"""

import math

import numpy as np

from rgflow import (
    Regime,
    alpha_of_t,
    boundary_curve,
    domain_contains,
    edge_of_t,
    fixed_points,
    t_crossover,
    t_star,
)

# ---------------------------------------------------------------------
# The segment endpoint alpha(t) (the turning point of v) decreases from
# 4 toward 3/2, and the support edge d(t) grows linearly with slope 8/27.
# ---------------------------------------------------------------------
print("turning point alpha(t) and support edge d(t)")
for t in (0.0, 2.0, 10.0, 50.0):
    print(f"  t = {t:4g}: alpha = {alpha_of_t(t):.6f}, "
          f"d = {edge_of_t(t):.6f}")
print(f"  d(50)/50 = {edge_of_t(50.0) / 50.0:.6f}  (8/27 = {8 / 27:.6f})")
print("  (alpha - 3/2) * t stays near ~0.6: the folium is approached "
      "at rate O(1/t)")
for t in (10.0, 20.0, 40.0):
    print(f"    t = {t:3g}: (alpha - 3/2) t = {(alpha_of_t(t) - 1.5) * t:.4f}")

# ---------------------------------------------------------------------
# Boundary arcs.  At t = 0 the arc is exactly the semicircle
# |p + 2| = 2; as t grows the domains nest downward into the folium.
# ---------------------------------------------------------------------
arc0 = boundary_curve(0.0, 128).arc
worst = max(abs(q - math.sqrt(max(4.0 - (p + 2.0) ** 2, 0.0)))
            for p, q in arc0)
print(f"\nt = 0 arc vs semicircle: max deviation = {worst:.3e}")

ps = np.linspace(-1.5, 0.0, 4001)
hs = np.sqrt(np.maximum((3.0 * ps**2 + 2.0 * ps**3) / (1.0 - 2.0 * ps), 0.0))
print("point-to-curve distance from the arc to the limit folium")
for t in (5.0, 20.0, 50.0):
    arc = boundary_curve(t, 96).arc
    dmax = max(float(np.min(np.hypot(ps - p, hs - q))) for p, q in arc)
    print(f"  t = {t:4g}: {dmax:.4f}")

eta = -2.0 + 0.5j
print(f"\nmembership of eta = {eta}: "
      f"t=0 -> {domain_contains(0.0, eta)}, t=2 -> {domain_contains(2.0, eta)}")

# ---------------------------------------------------------------------
# Fixed points zeta(t) of p -> v(t, p).  At t = 0 they are the complex
# pair solving 2 zeta^3 - zeta - 2 = 0; the pair collides on the real
# axis at t*, after which two real fixed points separate.
# ---------------------------------------------------------------------
print("\nfixed-point trajectory")
for t in (0.0, 2.0, 5.0, 6.0):
    fp = fixed_points(t)
    print(f"  t = {t:3g}: zeta = {fp.zeta:.6f}, regime = {fp.regime.value}")

ts = t_star(1e-5)
tco = t_crossover(1e-6)
print(f"\ncollision scale  t*   = {ts:.6f}")
print(f"crossover scale  t_co = {tco:.6f}")
fp = fixed_points(tco)
print(f"zeta_star(t_co) + alpha(t_co) = "
      f"{fp.zeta_star.real + alpha_of_t(tco):+.2e}")
assert fixed_points(ts - 0.1).regime is Regime.CONJUGATE_PAIR
assert fixed_points(ts + 0.1).regime is Regime.REAL_PAIR
