"""Stress in a power-law viscoelastic material, three equivalent ways.

Flour dough relaxes stress like G(t) = k t^(-0.36).  For any piecewise-
linear strain program the stress can be computed by the discrete
superposition sum, by its exact continuum limit, or through the fractional
derivative of the strain -- the fading-memory form.  All three agree.
"""

from fracalc.visco import (
    Material,
    StrainProgram,
    fractional_form,
    relaxation_test,
    superposition_integral,
    superposition_sum,
)

dough = Material(k=1.0, alpha=0.36)

print("Step-strain relaxation test, unit strain:")
for t in (0.5, 1.0, 2.0, 8.0):
    print(f"  sigma({t}) = {relaxation_test(dough, 1.0, t):.6f}")
print("  (power-law fading: never exponential, never fully gone)")

print()
ramp = StrainProgram(((0.0, 0.0), (1.0, 1.0)))
print("Unit ramp on [0,1], stress at t=1:")
exact = superposition_integral(dough, ramp, 1.0)
print(f"  continuum superposition: {exact:.8f}  (= 1/0.64 = {1/0.64:.8f})")
for N in (64, 1024, 16384):
    s = superposition_sum(dough, ramp, 1.0, N)
    print(f"  discrete sum, N={N:>6}:  {s:.8f}  (gap {abs(s - exact):.2e})")
frac = fractional_form(dough, ramp, 1.0)
print(f"  fractional-derivative form: {frac:.8f}  (gap {abs(frac - exact):.2e})")

print()
program = StrainProgram(((0.0, 0.2), (0.5, 1.0), (1.0, 0.4)))
print("Load-then-partial-release program, all three routes at t=1.5:")
s_sum = superposition_sum(dough, program, 1.5, 16384)
s_int = superposition_integral(dough, program, 1.5)
s_frac = fractional_form(dough, program, 1.5)
print(f"  sum        {s_sum:.8f}")
print(f"  integral   {s_int:.8f}")
print(f"  fractional {s_frac:.8f}")
print("  the material still carries stress from strain released long ago")
