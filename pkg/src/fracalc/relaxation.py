"""Fractional relaxation/growth: order-a derivative of u equals lam * u.

For t > 0 the unknown obeys the eigenvalue equation of the one-sided
fractional derivative; for t <= 0 the solution is pinned to a prescribed
history.  Constant histories have the closed form

    u(t) = C * E_{a,1}(lam * t^a),

sampled by :func:`solve_constant_history`.  General histories are marched by
:func:`solve_marching`: the memory integral over the computed past is the
exact kernel integral of the piecewise-linear trajectory (implicit in the
newest value), and the contribution of times before zero is evaluated from
the history analytically, so nonlocality is never silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StabilityError, TailDivergenceError, ValidationError
from .frac_ops import (
    Constant,
    ConstantBefore,
    Exponential,
    GridSampled,
    HistoryFunction,
    QuadratureSpec,
    ZeroBefore,
    _adaptive_integral,
    _implied_past,
    frac_coefficient,
)
from .special_fn import EvalPolicy, MLParams, mittag_leffler

__all__ = ["RelaxationProblem", "Trajectory", "solve_constant_history", "solve_marching"]


@dataclass(frozen=True)
class RelaxationProblem:
    """Eigenvalue problem data: order, rate, history on (-inf, 0], horizon.

    ``u0`` optionally overrides the splice value at t=0 (defaults to the
    history's value there); a discontinuous splice is permitted and simply
    contributes an integrable kernel term.
    """

    alpha: float
    lam: float
    history: HistoryFunction
    t_end: float
    dt: float
    u0: float | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ValidationError("alpha must lie in (0,1)")
        if not (self.t_end > 0.0 and self.dt > 0.0 and self.dt < self.t_end):
            raise ValidationError("need 0 < dt < t_end")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape or t.ndim != 1:
            raise ValidationError("times and values must be 1-D of equal length")
        if np.any(np.diff(t) <= 0.0):
            raise ValidationError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def solve_constant_history(
    alpha: float, lam: float, C: float, t_end: float, dt: float,
    policy: EvalPolicy | None = None,
) -> Trajectory:
    """Sample the closed-form solution C * E_{a,1}(lam * t^a) on [0, t_end].

    ``alpha`` may be 1 (classical exponential growth/decay).
    """
    if not (0.0 < alpha <= 1.0):
        raise ValidationError("alpha must lie in (0, 1]")
    if not (t_end > 0.0 and 0.0 < dt <= t_end):
        raise ValidationError("need 0 < dt <= t_end")
    times = np.arange(0.0, t_end + 0.5 * dt, dt)
    p = MLParams(alpha, 1.0)
    values = np.array(
        [C * mittag_leffler(p, lam * tv**alpha, policy) for tv in times]
    )
    return Trajectory(times, values)


def _pw_history_integral(g: GridSampled, alpha: float, t: float) -> float:
    """Exact int_{-inf}^0 u(tau) (t-tau)^(-1-a) dtau for a sampled history."""
    if g.t_end < -1e-12 * max(g.dt, 1.0):
        raise ValidationError("history grid must reach t = 0")
    if isinstance(g.tail, ZeroBefore):
        c_past = 0.0
    elif isinstance(g.tail, ConstantBefore):
        c_past = g.tail.c
    else:
        raise TailDivergenceError(
            "marching requires a zero or constant history tail"
        )
    nodes = g.t0 + g.dt * np.arange(g.values.size)
    total = c_past * (t - g.t0) ** (-alpha) / alpha
    for j in range(g.values.size - 1):
        a_, b_ = nodes[j], nodes[j + 1]
        if a_ >= 0.0:
            break
        b_c = min(b_, 0.0)
        u_a = g.values[j]
        slope = (g.values[j + 1] - g.values[j]) / g.dt
        s_hi = t - a_
        s_lo = t - b_c
        A = (s_lo ** (-alpha) - s_hi ** (-alpha)) / alpha
        P1 = (s_hi ** (1.0 - alpha) - s_lo ** (1.0 - alpha)) / (1.0 - alpha)
        # u(tau) = u_a + slope*(tau - a_) and tau - a_ = s_hi - s
        total += u_a * A + slope * (s_hi * A - P1)
    return total


def _history_kernel_integral(
    history: HistoryFunction, alpha: float, t: float, q: QuadratureSpec
) -> float:
    """int_{-inf}^0 C(tau) (t - tau)^(-1-a) dtau for t > 0."""
    if isinstance(history, Constant):
        return history.c * t ** (-alpha) / alpha
    if isinstance(history, GridSampled):
        return _pw_history_integral(history, alpha, t)
    past = _implied_past(history)
    if past is not None:
        # these kinds are constant on (-inf, 0], which is all that matters
        _, c_past = past
        return c_past * t ** (-alpha) / alpha
    if isinstance(history, Exponential):
        lo = -45.0 / history.lam
        f = lambda tau: history.value(tau) * (t - tau) ** (-1.0 - alpha)
        mid, _ = _adaptive_integral(f, lo, 0.0, [], abs(t) + 1.0, q)
        return mid
    raise ValidationError(
        f"unsupported history kind {type(history).__name__} for marching"
    )


def _internal_grid(alpha: float, t_end: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Output times plus a mesh graded into t=0.

    The solution behaves like t^a at the splice, so a uniform mesh caps the
    observable order at a.  Grading t_j ~ (j/N)^r with r = (2-a)/a restores
    the full product-trapezoidal order 2-a.  Returns (grid, output_index).
    """
    n_out = int(round(t_end / dt))
    out = dt * np.arange(n_out + 1)
    r = max(1.0, (2.0 - alpha) / alpha)
    graded = t_end * (np.arange(n_out + 1) / n_out) ** r
    grid = np.unique(np.concatenate([out, graded]))
    # indices of the output times inside the merged grid
    idx = np.searchsorted(grid, out)
    return grid, idx


def solve_marching(p: RelaxationProblem, q: QuadratureSpec | None = None) -> Trajectory:
    """Implicit product-trapezoidal marching for a general history.

    At each step the memory integral over [0, t_m] uses the exact kernel
    moments of the piecewise-linear numerical trajectory on an internally
    graded mesh (clustered at the splice, where the solution has a t^a
    cusp); the newest value enters implicitly and a scalar linear equation
    is solved per step.  No step restriction arises for lam < 0; a
    nonpositive implicit coefficient (large lam * dt^a) raises
    StabilityError instead of being clamped.  Output is sampled on the
    uniform grid (0, dt, ..., t_end).
    """
    q = q or QuadratureSpec()
    alpha, lam = p.alpha, p.lam
    grid, out_idx = _internal_grid(alpha, p.t_end, p.dt)
    n = grid.size - 1
    if n < 1:
        raise ValidationError("t_end shorter than one step")
    c_a = frac_coefficient(alpha)

    u = np.empty(n + 1)
    u[0] = p.u0 if p.u0 is not None else float(p.history.value(0.0))
    h = np.diff(grid)

    hist_is_zero = isinstance(p.history, Constant) and p.history.c == 0.0

    for m in range(1, n + 1):
        t_m = grid[m]
        h_weight = t_m ** (-alpha) / alpha
        hc = 0.0 if hist_is_zero else _history_kernel_integral(
            p.history, alpha, t_m, q
        )
        newest = h[m - 1] ** (-alpha) / (1.0 - alpha)
        coef = h_weight + newest
        known = hc + u[m - 1] * newest
        if m >= 2:
            s_hi = t_m - grid[: m - 1]
            s_lo = t_m - grid[1:m]
            A = (s_lo ** (-alpha) - s_hi ** (-alpha)) / alpha
            B = (
                s_hi ** (1.0 - alpha) - s_lo ** (1.0 - alpha)
            ) / (1.0 - alpha) - s_lo * A
            u_hi = u[1:m]
            slope = (u[1:m] - u[: m - 1]) / h[: m - 1]
            coef += float(np.sum(A))
            known += float(np.sum(u_hi * A - slope * B))
        denom = c_a * coef - lam
        if denom <= 0.0:
            raise StabilityError(
                f"implicit coefficient nonpositive at step {m}: "
                f"lam*dt^alpha = {lam * p.dt**alpha:.3g} too large"
            )
        u[m] = c_a * known / denom
    return Trajectory(grid[out_idx], u[out_idx])
