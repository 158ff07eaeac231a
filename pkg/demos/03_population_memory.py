"""Population growth with memory: fractional rate equation and model fits.

A population whose growth rate reflects its whole history follows
D^a u = lam u with u pinned to a historic level before time zero.  The
closed-form solution is the fractional exponential; the marching solver
handles arbitrary histories.  On data generated with memory, the fractional
fit recovers the order and beats the classical exponential fit, which is
nested inside it at a = 1.
"""

import numpy as np

from fracalc import Constant, MLParams, mittag_leffler
from fracalc.fitting import TimeSeries, fit_exponential, fit_fractional
from fracalc.relaxation import RelaxationProblem, solve_constant_history, solve_marching

print("Marching vs closed form (constant history 1, a=0.5, lam=-1):")
p = RelaxationProblem(alpha=0.5, lam=-1.0, history=Constant(1.0),
                      t_end=1.0, dt=1e-3)
num = solve_marching(p)
ref = solve_constant_history(0.5, -1.0, 1.0, 1.0, 1e-3)
err = np.max(np.abs(num.values - ref.values))
print(f"  max deviation over [0,1]: {err:.2e}")

print()
print("History matters: same starting value, different pasts")
p_zero = RelaxationProblem(0.5, -1.0, Constant(0.0), 1.0, 1e-2, u0=1.0)
u_zero = solve_marching(p_zero)
u_const = solve_marching(RelaxationProblem(0.5, -1.0, Constant(1.0), 1.0, 1e-2))
print(f"  value at t=1, empty past:    {u_zero.values[-1]:.6f}")
print(f"  value at t=1, constant past: {u_const.values[-1]:.6f}")

print()
print("Fitting synthetic 'census' data generated with memory (a=0.7):")
t = np.linspace(0.0, 8.0, 17)
truth = MLParams(0.7, 1.0)
values = np.array([1.3 * mittag_leffler(truth, 0.5 * tv**0.7) for tv in t])
rng = np.random.default_rng(2024)
data = TimeSeries(t, values * (1.0 + 0.005 * rng.standard_normal(t.size)))

exp_fit = fit_exponential(data)
frac_fit = fit_fractional(data)
print(f"  exponential: lam={exp_fit.lam:.4f}, C={exp_fit.C:.4f}, "
      f"rmse={exp_fit.rmse:.5f}")
print(f"  fractional:  a={frac_fit.alpha:.3f}, lam={frac_fit.lam:.4f}, "
      f"C={frac_fit.C:.4f}, rmse={frac_fit.rmse:.5f}")
print(f"  improvement: {exp_fit.rmse / max(frac_fit.rmse, 1e-300):.1f}x lower rmse "
      f"(true order was 0.70)")
