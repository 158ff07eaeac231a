"""Relaxation solver checks: closed form, marching, history sensitivity."""

import numpy as np
import pytest

from fracalc.errors import StabilityError, ValidationError
from fracalc.frac_ops import Constant, GridSampled, ZeroBefore
from fracalc.relaxation import (
    RelaxationProblem,
    Trajectory,
    solve_constant_history,
    solve_marching,
)
from fracalc.special_fn import MLParams, mittag_leffler

from oracles import ml_series_oracle


class TestTypes:
    def test_trajectory_validation(self):
        with pytest.raises(ValidationError):
            Trajectory(np.array([0.0, 0.0, 1.0]), np.zeros(3))
        with pytest.raises(ValidationError):
            Trajectory(np.array([0.0, 1.0]), np.zeros(3))

    def test_problem_validation(self):
        with pytest.raises(ValidationError):
            RelaxationProblem(1.5, 1.0, Constant(1.0), 1.0, 0.1)
        with pytest.raises(ValidationError):
            RelaxationProblem(0.5, 1.0, Constant(1.0), 1.0, 2.0)


class TestConstantHistoryClosedForm:
    def test_classical_limit_is_exponential(self):
        tr = solve_constant_history(1.0, 1.0, 1.0, 1.0, 0.125)
        assert np.allclose(tr.values, np.exp(tr.times), rtol=1e-12)

    def test_zero_rate_is_constant(self):
        tr = solve_constant_history(0.5, 0.0, 3.0, 2.0, 0.25)
        assert np.allclose(tr.values, 3.0)

    def test_decay_value_from_series_oracle(self):
        tr = solve_constant_history(0.5, -1.0, 1.0, 1.0, 0.5)
        ref = ml_series_oracle(0.5, 1.0, -1.0)
        assert tr.values[-1] == pytest.approx(ref, rel=1e-10)


class TestMarching:
    def test_matches_closed_form(self):
        p = RelaxationProblem(0.5, -1.0, Constant(1.0), 1.0, 1e-3)
        num = solve_marching(p)
        ref = solve_constant_history(0.5, -1.0, 1.0, 1.0, 1e-3)
        assert np.max(np.abs(num.values - ref.values)) <= 5e-3

    def test_zero_history_zero_solution(self):
        p = RelaxationProblem(0.5, 3.0, Constant(0.0), 1.0, 0.01)
        num = solve_marching(p)
        assert np.allclose(num.values, 0.0)

    def test_near_classical_order_tracks_exp(self):
        p = RelaxationProblem(0.999, 1.0, Constant(1.0), 1.0, 1e-3)
        num = solve_marching(p)
        assert np.max(np.abs(num.values - np.exp(num.times))) <= 1e-2

    def test_order_of_accuracy(self):
        errs = []
        for dt in (4e-3, 2e-3, 1e-3):
            p = RelaxationProblem(0.5, -1.0, Constant(1.0), 1.0, dt)
            num = solve_marching(p)
            ref = solve_constant_history(0.5, -1.0, 1.0, 1.0, dt)
            errs.append(np.max(np.abs(num.values - ref.values)))
        assert errs[0] / errs[1] >= 1.7
        assert errs[1] / errs[2] >= 1.7

    def test_monotone_growth(self):
        p = RelaxationProblem(0.6, 0.5, Constant(1.0), 1.0, 5e-3)
        num = solve_marching(p)
        assert np.all(np.diff(num.values) >= -1e-13)

    def test_growth_reaches_mittag_leffler_value(self):
        p = RelaxationProblem(0.7, 0.8, Constant(2.0), 1.0, 1e-3)
        num = solve_marching(p)
        want = 2.0 * mittag_leffler(MLParams(0.7, 1.0), 0.8)
        assert num.values[-1] == pytest.approx(want, rel=1e-3)

    def test_stability_error_reported(self):
        # large positive rate with a coarse step: implicit coefficient flips
        with pytest.raises(StabilityError):
            solve_marching(RelaxationProblem(0.5, 500.0, Constant(1.0), 1.0, 0.25))

    def test_history_sensitivity(self):
        # same splice value, different pasts => different trajectories
        p_const = RelaxationProblem(0.5, -1.0, Constant(1.0), 1.0, 5e-3)
        p_zero = RelaxationProblem(0.5, -1.0, Constant(0.0), 1.0, 5e-3, u0=1.0)
        u_const = solve_marching(p_const)
        u_zero = solve_marching(p_zero)
        assert np.max(np.abs(u_const.values - u_zero.values)) > 1e-3

    def test_sampled_history(self):
        # a sampled constant history must reproduce the constant-history run
        hist = GridSampled(-5.0, 0.05, np.ones(101), ZeroBefore(-5.0))
        p_grid = RelaxationProblem(0.5, -1.0, hist, 1.0, 5e-3)
        p_const = RelaxationProblem(0.5, -1.0, Constant(1.0), 1.0, 5e-3)
        u_grid = solve_marching(p_grid)
        u_const = solve_marching(p_const)
        # the grid history differs from a true constant only through the
        # neglected (-inf, -5] window, which carries (t+5)^(-a)/a kernel mass
        tail_scale = (1.0 + 5.0) ** -0.5 / 0.5
        assert np.max(np.abs(u_grid.values - u_const.values)) <= 0.5 * tail_scale

    def test_exponential_history_residual(self):
        # decaying exponential history e^t on (-inf, 0]; verify the computed
        # trajectory satisfies the operator equation on the spliced function
        from fracalc.frac_ops import Exponential, marchaud_derivative

        alpha, lam, dt = 0.5, -1.0, 2e-3
        p = RelaxationProblem(alpha, lam, Exponential(1.0), 1.0, dt)
        num = solve_marching(p)
        assert num.values[0] == pytest.approx(1.0)
        t0 = -30.0
        pre = int(round(-t0 / dt))
        full_v = np.concatenate([np.exp(t0 + dt * np.arange(pre)), num.values])
        g = GridSampled(t0, dt, full_v, ZeroBefore(t0))
        for tv in (0.3, 0.7):
            lhs = marchaud_derivative(g, alpha, tv)
            rhs = lam * float(g.value(tv))
            assert lhs == pytest.approx(rhs, abs=5e-3 * abs(rhs) + 2e-3)

    def test_discrete_residual(self):
        # the computed trajectory satisfies the operator equation pointwise
        p = RelaxationProblem(0.4, -0.7, Constant(1.0), 1.0, 2e-3)
        num = solve_marching(p)
        # evaluate the derivative of the splice of history and trajectory
        t0 = -1.0
        pre = int(round(-t0 / p.dt))
        full_t = t0 + p.dt * np.arange(pre + num.times.size)
        full_v = np.concatenate([np.ones(pre), num.values])
        from fracalc.frac_ops import ConstantBefore, marchaud_derivative

        g = GridSampled(t0, p.dt, full_v, ConstantBefore(1.0, t0))
        for tv in (0.25, 0.5, 0.9):
            lhs = marchaud_derivative(g, p.alpha, tv)
            rhs = p.lam * float(g.value(tv))
            assert lhs == pytest.approx(rhs, abs=5e-3 * abs(rhs) + 2e-3)
