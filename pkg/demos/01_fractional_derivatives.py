"""Tour of the one-sided fractional derivative on closed-form operands.

Shows the constant, power and exponential rules, what happens to a power
function whose past is lifted from 0 to 1 (nonlocality in action), and the
classical limits as the order approaches 0 and 1.
"""

import math

from fracalc import (
    Constant,
    Exponential,
    ModifiedPower,
    PowerPlus,
    consistency_limit_probe,
    gamma,
    marchaud_derivative,
)

print("=" * 64)
print("Constant rule: derivatives of constants vanish for every order")
print("=" * 64)
for alpha in (0.25, 0.5, 0.75):
    v = marchaud_derivative(Constant(7.0), alpha, t=1.0)
    print(f"  order {alpha}: D^a 7 = {v:.2e}")

print()
print("=" * 64)
print("Power rule: D^a (t_+)^b = b G(b)/G(1+b-a) t^(b-a)")
print("=" * 64)
for beta, alpha, t in [(1.0, 0.5, 1.0), (2.0, 0.5, 1.0), (1.5, 0.25, 2.0)]:
    got = marchaud_derivative(PowerPlus(beta), alpha, t)
    want = beta * gamma(beta) / gamma(1 + beta - alpha) * t ** (beta - alpha)
    print(f"  b={beta}, a={alpha}, t={t}: {got:.10f} (closed form {want:.10f})")
print(f"  note D^(1/2) t_+ at t=1 is 2/sqrt(pi) = {2/math.sqrt(math.pi):.10f}")

print()
print("=" * 64)
print("Exponential rule: e^(lam t) is an eigenfunction with value lam^a")
print("=" * 64)
for lam in (0.5, 1.0, 2.0):
    got = marchaud_derivative(Exponential(lam), 0.5, t=0.0)
    print(f"  lam={lam}: D^(1/2) e^(lam t) |_0 = {got:.10f} = lam^0.5 = {lam**0.5:.10f}")

print()
print("=" * 64)
print("The influence of the past: same function for t > 0, different tail")
print("=" * 64)
for t in (0.5, 1.0, 2.0):
    thin = marchaud_derivative(PowerPlus(2.0), 0.5, t)
    fat = marchaud_derivative(ModifiedPower(2.0), 0.5, t)
    print(f"  t={t}: zero past -> {thin:.6f}   unit past -> {fat:.6f}")
print("  a fatter past lowers the derivative: the operator remembers")

print()
print("=" * 64)
print("Consistency limits on (t_+)^2 at t=1")
print("=" * 64)
up = consistency_limit_probe(PowerPlus(2.0), 1.0, "to_one")
down = consistency_limit_probe(PowerPlus(2.0), 1.0, "to_zero")
print(f"  orders 0.9, 0.99, 0.999  -> {up}   (classical derivative: 2)")
print(f"  orders 0.1, 0.01, 0.001  -> {down}   (function value: 1)")

print()
print("But the unit-past power does NOT recover itself as the order -> 0:")
probe = consistency_limit_probe(ModifiedPower(2.0), 2.0, "to_zero")
print(f"  at t=2 the probe tends to {probe[-1]:.4f} = t^2 - 1, not u(2) = 4")
print("  (the fat tail at -inf never stops influencing the derivative)")
