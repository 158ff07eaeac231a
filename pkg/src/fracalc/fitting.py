"""Growth-model fits: classical exponential vs fractional relaxation.

Both models use elapsed time from the first sample (the history before it is
the constant C), so fits are covariant under shifting all timestamps:

    exponential:  C * exp(lam * s)
    fractional:   C * E_{a,1}(lam * s^a),  a in (0, 1]

The fractional family nests the exponential at a = 1, so its best RMSE can
never be worse; the optimizer explicitly evaluates the a = 1 candidate to
keep that guarantee unconditional.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ValidationError
from .special_fn import EvalPolicy, MLParams, mittag_leffler

__all__ = ["TimeSeries", "FitResult", "fit_exponential", "fit_fractional"]


@dataclass(frozen=True)
class TimeSeries:
    """Strictly increasing sample times with positive values."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValidationError("times and values must be 1-D of equal length")
        if t.size < 4:
            raise ValidationError("need at least 4 samples (3 parameters + 1)")
        if np.any(np.diff(t) <= 0.0):
            raise ValidationError("times must be strictly increasing")
        if np.any(v <= 0.0):
            raise ValidationError("values must be positive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def elapsed(self) -> np.ndarray:
        return self.times - self.times[0]


@dataclass(frozen=True)
class FitResult:
    alpha: float
    lam: float
    C: float
    rmse: float
    model: str  # "exponential" or "fractional"


def _rmse(pred: np.ndarray, values: np.ndarray) -> float:
    return float(np.sqrt(np.mean((pred - values) ** 2)))


def _best_C(basis: np.ndarray, values: np.ndarray) -> float:
    """Least-squares amplitude for a model C * basis."""
    denom = float(np.dot(basis, basis))
    if denom <= 0.0:
        return 0.0
    return float(np.dot(basis, values) / denom)


def _exp_objective(lam: float, s: np.ndarray, v: np.ndarray):
    basis = np.exp(np.clip(lam * s, -700.0, 700.0))
    C = _best_C(basis, v)
    return _rmse(C * basis, v), C


def _lam_bracket(d: TimeSeries) -> tuple[float, float]:
    s = d.elapsed
    v = d.values
    span = max(s[-1], 1e-12)
    rough = (math.log(v[-1]) - math.log(v[0])) / span
    width = 5.0 * abs(rough) + 2.0 / span
    return rough - width, rough + width


def fit_exponential(d: TimeSeries) -> FitResult:
    """Least-squares (lam, C) for C * exp(lam * s); deterministic.

    Degenerate (constant) data yields lam = 0, C = mean, with a warning.
    """
    s = d.elapsed
    v = d.values
    if np.allclose(v, v[0], rtol=1e-14, atol=0.0):
        warnings.warn("degenerate constant series: returning lam = 0",
                      stacklevel=2)
        return FitResult(1.0, 0.0, float(v.mean()), 0.0, "exponential")
    lo, hi = _lam_bracket(d)
    # deterministic coarse grid + bounded local refinement
    grid = np.linspace(lo, hi, 97)
    errs = [_exp_objective(lam, s, v)[0] for lam in grid]
    i = int(np.argmin(errs))
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    res = minimize_scalar(lambda lam: _exp_objective(lam, s, v)[0],
                          bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    lam = float(res.x)
    rmse, C = _exp_objective(lam, s, v)
    if errs[i] < rmse:  # guard: refinement must not lose to the grid
        lam = float(grid[i])
        rmse, C = _exp_objective(lam, s, v)
    return FitResult(1.0, lam, C, rmse, "exponential")


def _frac_objective(alpha: float, lam: float, s: np.ndarray, v: np.ndarray,
                    policy: EvalPolicy):
    if alpha >= 1.0:
        return _exp_objective(lam, s, v)
    p = MLParams(alpha, 1.0)
    try:
        basis = np.array(
            [mittag_leffler(p, lam * sv**alpha, policy) for sv in s]
        )
    except (OverflowError, ArithmeticError):
        return 1e300, 0.0  # finite sentinel keeps the 1-D minimizer happy
    if not np.all(np.isfinite(basis)):
        return 1e300, 0.0
    C = _best_C(basis, v)
    return _rmse(C * basis, v), C


def _best_lam_for_alpha(alpha: float, d: TimeSeries, policy: EvalPolicy):
    s, v = d.elapsed, d.values
    lo, hi = _lam_bracket(d)
    grid = np.linspace(lo, hi, 21)
    errs = [_frac_objective(alpha, lam, s, v, policy)[0] for lam in grid]
    i = int(np.argmin(errs))
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    res = minimize_scalar(
        lambda lam: _frac_objective(alpha, lam, s, v, policy)[0],
        bounds=(a, b), method="bounded", options={"xatol": 1e-11},
    )
    lam = float(res.x)
    err, C = _frac_objective(alpha, lam, s, v, policy)
    if errs[i] < err:
        lam = float(grid[i])
        err, C = _frac_objective(alpha, lam, s, v, policy)
    return err, lam, C


def fit_fractional(d: TimeSeries, policy: EvalPolicy | None = None) -> FitResult:
    """Best (alpha, lam, C) over alpha in (0, 1]; nests the exponential fit.

    Coarse alpha grid with an inner deterministic lam search, then local
    alpha refinement; ties break toward the smallest alpha.  The returned
    RMSE never exceeds the exponential fit's (the alpha = 1 candidate is
    always evaluated).
    """
    policy = policy or EvalPolicy()
    exp_fit = fit_exponential(d)

    alphas = np.arange(0.05, 1.0001, 0.05)
    best = (exp_fit.rmse, 1.0, exp_fit.lam, exp_fit.C)
    for alpha in alphas:
        a = float(min(alpha, 1.0))
        err, lam, C = _best_lam_for_alpha(a, d, policy)
        if err < best[0] - 1e-15 or (
            abs(err - best[0]) <= 1e-15 and a < best[1]
        ):
            best = (err, a, lam, C)

    # local refinement around the best alpha (golden-section style, bounded)
    err0, a0, lam0, C0 = best
    lo = max(0.01, a0 - 0.05)
    hi = min(1.0, a0 + 0.05)
    res = minimize_scalar(
        lambda a: _best_lam_for_alpha(float(a), d, policy)[0],
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-6},
    )
    a1 = float(res.x)
    err1, lam1, C1 = _best_lam_for_alpha(a1, d, policy)
    if err1 < err0:
        err0, a0, lam0, C0 = err1, a1, lam1, C1

    # nesting guarantee
    if exp_fit.rmse < err0:
        return FitResult(1.0, exp_fit.lam, exp_fit.C, exp_fit.rmse, "fractional")
    return FitResult(a0, lam0, C0, err0, "fractional")
