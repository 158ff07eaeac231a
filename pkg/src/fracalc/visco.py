"""Viscoelastic stress responses for power-law relaxation moduli.

A material with relaxation modulus G(t) = k * t^(-a) responds to a strain
program eps(tau) with

    sigma(t) = eps(T0) * G(t - T0) + int_T0^t eps'(tau) G(t - tau) dtau,

the first term being the response to the initial loading step at the program
start T0.  Three equivalent evaluations are provided:

* ``superposition_sum``      discrete increment sum with N interior steps;
* ``superposition_integral`` exact per-segment antiderivatives (the strain
  is piecewise linear, so its rate is piecewise constant);
* ``fractional_form``        k * Gamma(1-a) times the order-a one-sided
  derivative of the strain extended by its initial value into the past.

The third form follows from integration by parts of the memory integral:
with G'(s) = -a k s^(-1-a) and the constant-past extension,

    int eps'(tau) G(t-tau) dtau = a k int (eps(t)-eps(tau)) (t-tau)^(-1-a) dtau
                                = k Gamma(1-a) * D^a eps(t).

Both routes are kept and cross-checked by the test suite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .frac_ops import (
    ConstantBefore,
    GridSampled,
    QuadratureSpec,
    marchaud_derivative,
)
from .special_fn import gamma

__all__ = [
    "Material",
    "PastRule",
    "StrainProgram",
    "relaxation_test",
    "superposition_sum",
    "superposition_integral",
    "fractional_form",
]


@dataclass(frozen=True)
class Material:
    """Power-law relaxation modulus G(t) = k * t^(-alpha), t > 0."""

    k: float
    alpha: float

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValidationError("Material.k must be > 0")
        if not (0.0 < self.alpha < 1.0):
            raise ValidationError("Material.alpha must lie in (0,1)")

    def modulus(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0):
            raise ValidationError("relaxation modulus is undefined for t <= 0")
        out = self.k * t ** (-self.alpha)
        return out if t.ndim else float(out)


class PastRule(enum.Enum):
    """How strain extends before the first breakpoint."""

    CONSTANT = "constant"  # eps(tau) = eps(first) for tau < first
    ZERO = "zero"


@dataclass(frozen=True)
class StrainProgram:
    """Piecewise-linear strain through (time, strain) breakpoints.

    Constant after the last breakpoint; before the first one the strain
    follows ``past_rule``.
    """

    breakpoints: tuple[tuple[float, float], ...]
    past_rule: PastRule = PastRule.CONSTANT

    def __post_init__(self) -> None:
        bp = tuple((float(a), float(b)) for a, b in self.breakpoints)
        if len(bp) < 1:
            raise ValidationError("need at least one breakpoint")
        times = [a for a, _ in bp]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValidationError("breakpoint times must be strictly increasing")
        object.__setattr__(self, "breakpoints", bp)

    @property
    def t_start(self) -> float:
        return self.breakpoints[0][0]

    @property
    def eps0(self) -> float:
        return self.breakpoints[0][1]

    def strain(self, tau):
        tau = np.asarray(tau, dtype=float)
        times = np.array([a for a, _ in self.breakpoints])
        vals = np.array([b for _, b in self.breakpoints])
        out = np.interp(tau, times, vals)
        if self.past_rule is PastRule.ZERO:
            out = np.where(tau < times[0], 0.0, out)
        return out if tau.ndim else float(out)

    def segments(self):
        """(a, b, rate) for each linear piece between breakpoints."""
        out = []
        for (a, ya), (b, yb) in zip(self.breakpoints, self.breakpoints[1:]):
            out.append((a, b, (yb - ya) / (b - a)))
        return out


def relaxation_test(m: Material, eps0: float, t: float) -> float:
    """Step-strain stress eps0 * G(t); singular (error) at t <= 0."""
    return eps0 * m.modulus(t)


def superposition_sum(m: Material, s: StrainProgram, t: float, N: int) -> float:
    """Discrete increment sum with step dtau = (t - T0)/(N + 1).

    The step choice keeps every modulus argument positive.  Converges to
    ``superposition_integral`` at first order in 1/N.
    """
    if N < 1:
        raise ValidationError("N must be >= 1")
    T0 = s.t_start
    if not t > T0:
        raise ValidationError("t must exceed the program start")
    dtau = (t - T0) / (N + 1)
    n = np.arange(1, N + 1)
    tau = T0 + n * dtau
    eps = s.strain(tau)
    eps_prev = s.strain(tau - dtau)
    incr = (eps - eps_prev) / dtau
    total = s.eps0 * m.modulus(t - T0)
    total += float(np.sum(incr * m.modulus(t - tau) * dtau))
    return total


def superposition_integral(m: Material, s: StrainProgram, t: float) -> float:
    """Continuum limit of the increment sum, exact per strain segment.

    For a segment of constant rate r on [a, b],
    int_a^b r G(t - tau) dtau = r k [(t-a)^(1-alpha) - (t-b)^(1-alpha)]/(1-alpha).
    """
    T0 = s.t_start
    if not t > T0:
        raise ValidationError("t must exceed the program start")
    one_m_a = 1.0 - m.alpha
    total = s.eps0 * m.modulus(t - T0)
    for a, b, rate in s.segments():
        if a >= t:
            break
        b_c = min(b, t)
        if rate == 0.0:
            continue
        total += rate * m.k * ((t - a) ** one_m_a - (t - b_c) ** one_m_a) / one_m_a
    return total


def fractional_form(
    m: Material,
    s: StrainProgram,
    t: float,
    q: QuadratureSpec | None = None,
    n_grid: int = 4096,
) -> float:
    """Stress via the order-alpha derivative of the constant-past strain.

    Requires ``PastRule.CONSTANT`` (the integration-by-parts step needs the
    strain frozen at its initial value for past times).  The strain is
    captured on a uniform grid for the operator evaluation; grids aligned
    with the breakpoints make the capture exact.
    """
    if s.past_rule is not PastRule.CONSTANT:
        raise ValidationError(
            "fractional_form requires the constant-past strain extension"
        )
    T0 = s.t_start
    if not t > T0:
        raise ValidationError("t must exceed the program start")
    dt_g = (t - T0) / n_grid
    tau = T0 + dt_g * np.arange(n_grid + 1)
    capture = GridSampled(T0, dt_g, s.strain(tau), ConstantBefore(s.eps0, T0))
    deriv = marchaud_derivative(capture, m.alpha, t, q)
    c_mat = m.k * gamma(1.0 - m.alpha)
    return s.eps0 * m.modulus(t - T0) + c_mat * deriv
