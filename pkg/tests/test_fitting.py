"""Model-fit checks: exact recovery, nesting, shift covariance."""

import numpy as np
import pytest

from fracalc.errors import ValidationError
from fracalc.fitting import FitResult, TimeSeries, fit_exponential, fit_fractional
from fracalc.special_fn import MLParams, mittag_leffler


def make_series(times, values):
    return TimeSeries(np.asarray(times, float), np.asarray(values, float))


def ml_curve(alpha, lam, C, s):
    p = MLParams(alpha, 1.0)
    return np.array([C * mittag_leffler(p, lam * sv**alpha) for sv in s])


class TestValidation:
    def test_too_short(self):
        with pytest.raises(ValidationError):
            make_series([0, 1, 2], [1, 2, 3])

    def test_nonpositive_values(self):
        with pytest.raises(ValidationError):
            make_series([0, 1, 2, 3], [1.0, -2.0, 3.0, 4.0])

    def test_nonmonotone_times(self):
        with pytest.raises(ValidationError):
            make_series([0, 2, 1, 3], [1.0, 2.0, 3.0, 4.0])


class TestExponentialFit:
    def test_exact_recovery(self):
        t = np.linspace(0.0, 3.0, 10)
        d = make_series(t, 2.0 * np.exp(0.3 * t))
        fit = fit_exponential(d)
        assert fit.lam == pytest.approx(0.3, abs=1e-7)
        assert fit.C == pytest.approx(2.0, rel=1e-6)
        assert fit.rmse <= 1e-9

    def test_constant_series_flagged(self):
        d = make_series([0, 1, 2, 3], [5.0, 5.0, 5.0, 5.0])
        with pytest.warns(UserWarning):
            fit = fit_exponential(d)
        assert fit.lam == 0.0
        assert fit.C == pytest.approx(5.0)

    def test_noisy_recovery_fixed_seed(self):
        rng = np.random.default_rng(42)
        t = np.linspace(0.0, 5.0, 24)
        truth = 1.5 * np.exp(0.4 * t)
        d = make_series(t, truth * (1.0 + 0.01 * rng.standard_normal(t.size)))
        fit = fit_exponential(d)
        assert abs(fit.lam - 0.4) / 0.4 <= 0.05

    def test_decay_recovery(self):
        t = np.linspace(0.0, 4.0, 12)
        d = make_series(t, 3.0 * np.exp(-0.7 * t))
        fit = fit_exponential(d)
        assert fit.lam == pytest.approx(-0.7, abs=1e-6)


class TestFractionalFit:
    def test_synthetic_alpha_recovery(self):
        t = np.linspace(0.0, 8.0, 17)
        d = make_series(t, ml_curve(0.7, 0.5, 1.0, t))
        fit = fit_fractional(d)
        assert abs(fit.alpha - 0.7) <= 0.02
        assert fit.rmse <= 1e-6

    def test_exact_exponential_data_hits_boundary(self):
        t = np.linspace(0.0, 3.0, 12)
        d = make_series(t, 2.0 * np.exp(0.3 * t))
        frac = fit_fractional(d)
        exp = fit_exponential(d)
        assert frac.rmse <= exp.rmse + 1e-12
        assert frac.alpha >= 0.97  # boundary model recovered

    @pytest.mark.parametrize("seed", [0, 1, 7])
    def test_nesting_inequality_on_noisy_data(self, seed):
        rng = np.random.default_rng(seed)
        t = np.sort(rng.uniform(0.0, 6.0, 16))
        t[0] = 0.0
        v = (1.0 + rng.uniform(0.5, 2.0)) * np.exp(0.2 * t)
        v *= 1.0 + 0.05 * rng.standard_normal(t.size)
        v = np.abs(v) + 0.1
        d = make_series(t, v)
        frac = fit_fractional(d)
        exp = fit_exponential(d)
        assert frac.rmse <= exp.rmse + 1e-12

    def test_time_shift_covariance(self):
        t = np.linspace(0.0, 8.0, 17)
        v = ml_curve(0.6, 0.4, 1.2, t)
        d0 = make_series(t, v)
        d1 = make_series(t + 1900.0, v)
        f0 = fit_fractional(d0)
        f1 = fit_fractional(d1)
        assert abs(f0.rmse - f1.rmse) <= 1e-9
        assert f0.alpha == pytest.approx(f1.alpha, abs=1e-9)

    def test_result_type(self):
        t = np.linspace(0.0, 2.0, 8)
        d = make_series(t, np.exp(t))
        fit = fit_fractional(d)
        assert isinstance(fit, FitResult)
        assert fit.model == "fractional"
        assert 0.0 < fit.alpha <= 1.0
