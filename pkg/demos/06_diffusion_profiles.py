"""Fundamental solutions of time-fractional diffusion and their shape.

For order 1 the unit-impulse response is the Gaussian; for smaller orders
the profile develops a cusp at the origin and heavy shoulders, yet it stays
a probability density and obeys the self-similar scaling
u(x,t) = s^-1 H(|x|/s) with s = (k t^a / 2)^(1/2).
"""

import numpy as np
from scipy.integrate import simpson

from fracalc.diffusion import (
    DiffusionParams,
    fundamental_solution,
    msd_check,
    self_similar_profile,
)

print("Peak value and mass at t=1, k=1:")
for alpha in (1.0, 0.8, 0.5, 0.3):
    p = DiffusionParams(alpha, 1.0, 1.0)
    u0 = fundamental_solution(p, 0.0)[0]
    xr = np.linspace(0.0, 16.0 * p.spread, 4097)
    mass = 2.0 * simpson(fundamental_solution(p, xr), x=xr)
    print(f"  a={alpha:.1f}: u(0) = {u0:.6f}   integral = {mass:.8f}")

print()
print("Profile sections u(x, 1):")
xs = np.array([0.0, 0.25, 0.5, 1.0, 2.0, 4.0])
print("      x:" + "".join(f"{x:>10.2f}" for x in xs))
for alpha in (1.0, 0.5):
    u = fundamental_solution(DiffusionParams(alpha, 1.0, 1.0), xs)
    print(f"  a={alpha:.1f}:" + "".join(f"{v:>10.5f}" for v in u))
print("  (the fractional profile is sharper at 0 and fatter far out)")

print()
print("Second-moment growth <x^2> = const * t^a:")
for alpha in (1.0, 0.5):
    m1 = msd_check(DiffusionParams(alpha, 1.0, 1.0))
    m2 = msd_check(DiffusionParams(alpha, 1.0, 2.0))
    print(f"  a={alpha:.1f}: msd(2)/msd(1) = {m2 / m1:.6f}   2^a = {2**alpha:.6f}")

print()
print("Self-similar shape H(r) (order 0.5), reconstructing two times:")
r = np.array([0.0, 0.5, 1.0, 2.0])
H = self_similar_profile(0.5, r)
print("  H:", np.array2string(H, precision=6))
for t in (0.5, 2.0):
    p = DiffusionParams(0.5, 1.0, t)
    s = p.spread
    direct = fundamental_solution(p, s * r)
    print(f"  t={t}: max |u - H/s| = {np.max(np.abs(direct - H / s)):.2e}")
