"""Gamma function and two-parameter Mittag-Leffler function on the real line.

The Mittag-Leffler function

    E_{a,b}(t) = sum_{k>=0} t^k / Gamma(a*k + b),      a > 0, b > 0,

is the "fractional exponential": E_{1,1}(t) = exp(t), and t -> E_{a,1}(L*t^a)
is an eigenfunction of the one-sided fractional derivative of order a with
eigenvalue L (see :mod:`fracalc.frac_ops`).

Evaluation strategy
-------------------
* Plain float64 series with compensated summation whenever the alternating
  cancellation stays small enough to certify the requested tolerance.
* Arbitrary-precision (mpmath) series when cancellation would destroy float64
  accuracy: the working precision is sized from an a-priori estimate of the
  largest series term.
* For E_{a,1}(-x) with x large, the algebraic large-argument expansion

      E_{a,1}(-x) ~ sum_{j>=1} (-1)^{j+1} x^{-j} / Gamma(1 - j*a)

  truncated at its smallest term.  The first omitted term is used as the
  error estimate.  This branch is also used below the nominal threshold when
  the series would need more than ``max_terms`` terms *and* the expansion
  certifies the tolerance on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .errors import NonConvergenceError, PoleError, ValidationError

__all__ = [
    "MLParams",
    "EvalPolicy",
    "gamma",
    "rgamma",
    "mittag_leffler",
    "ml_derivative_check",
]

# Lanczos approximation, g = 7, 9 coefficients (double precision quality).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    """sin(pi*x) with argument reduction so accuracy survives large |x|."""
    r = x - round(x)
    s = math.sin(math.pi * r)
    return s if (round(x) % 2 == 0) else -s


def _lanczos_positive(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (z + i)
    base = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * base ** (z + 0.5) * math.exp(-base) * acc


def gamma(x: float) -> float:
    """Gamma(x) for real x excluding the poles at 0, -1, -2, ...

    Uses the Lanczos rational approximation for x >= 0.5 and the reflection
    formula Gamma(x) = pi / (sin(pi*x) * Gamma(1-x)) below.

    Raises
    ------
    PoleError
        If ``x`` is a non-positive integer.
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    if _is_nonpositive_integer(x):
        raise PoleError(f"gamma pole at x={x!r}")
    if x >= 0.5:
        return _lanczos_positive(x)
    return math.pi / (_sinpi(x) * _lanczos_positive(1.0 - x))


def rgamma(x: float) -> float:
    """1/Gamma(x), defined on all of R (zero at the poles of Gamma)."""
    if _is_nonpositive_integer(x):
        return 0.0
    return 1.0 / gamma(x)


@dataclass(frozen=True)
class MLParams:
    """Parameters (a, b) of the two-parameter Mittag-Leffler function."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValidationError(f"MLParams.alpha must be > 0, got {self.alpha}")
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise ValidationError(f"MLParams.beta must be > 0, got {self.beta}")


@dataclass(frozen=True)
class EvalPolicy:
    """Knobs controlling Mittag-Leffler evaluation.

    ``asymptotic_threshold`` is the |t| above which the large-negative-argument
    expansion is preferred for E_{a,1}(-x); below it the power series (with
    precision escalation) is the primary route.
    """

    series_tol: float = 1e-14
    max_terms: int = 2000
    asymptotic_threshold: float = 50.0

    def __post_init__(self) -> None:
        if not self.series_tol > 0.0:
            raise ValidationError("series_tol must be > 0")
        if self.max_terms < 1:
            raise ValidationError("max_terms must be >= 1")
        if not self.asymptotic_threshold > 0.0:
            raise ValidationError("asymptotic_threshold must be > 0")


_DEFAULT_POLICY = EvalPolicy()


def _series_float(alpha: float, beta: float, t: float, policy: EvalPolicy):
    """Float64 series pass.

    Returns (value, ok) where ok means the rounding-error estimate certifies
    ``policy.series_tol`` relative accuracy.
    """
    terms = []
    term = rgamma(beta)  # k = 0
    terms.append(term)
    max_abs = abs(term)
    total = term
    k = 1
    tiny_streak = 0
    while k <= policy.max_terms:
        # t^k / Gamma(alpha*k + beta); computed directly to avoid drifting
        # recurrences across Gamma pole neighbourhoods.
        g = alpha * k + beta
        lg = math.lgamma(g)
        ln_mag = k * math.log(abs(t)) - lg if t != 0.0 else -math.inf
        if ln_mag < -745.0:
            term = 0.0
        elif ln_mag > 709.0:
            raise OverflowError(
                f"mittag_leffler({alpha}, {beta})({t}) exceeds float range"
            )
        else:
            term = math.copysign(math.exp(ln_mag), 1.0)
            if t < 0.0 and (k % 2 == 1):
                term = -term
        terms.append(term)
        total += term
        a = abs(term)
        if a > max_abs:
            max_abs = a
        ref = max(abs(total), max_abs * 1e-30, 1e-300)
        if a <= 0.25 * policy.series_tol * ref:
            tiny_streak += 1
            if tiny_streak >= 3:
                break
        else:
            tiny_streak = 0
        k += 1
    else:
        raise NonConvergenceError(
            f"Mittag-Leffler series did not converge within {policy.max_terms} "
            f"terms (alpha={alpha}, beta={beta}, t={t})"
        )
    value = math.fsum(terms)
    # rounding-error estimate: each term carries O(k*eps) relative error and
    # fsum adds them exactly; the sum magnifies this by max|term| / |value|.
    err = (k + 8) * 2.3e-16 * max_abs
    ok = abs(value) > 0.0 and err <= policy.series_tol * abs(value)
    return value, ok


def _ln_term(alpha: float, beta: float, x: float, k: float) -> float:
    return k * math.log(x) - math.lgamma(alpha * k + beta)


def _ln_peak(alpha: float, beta: float, x: float) -> tuple[float, float]:
    """(peak index, ln of peak |term|) of the series for |t| = x."""
    if x <= 1.0:
        return 0.0, 0.0
    k_star = max(0.0, (x ** (1.0 / alpha) - beta) / alpha)
    if k_star <= 1.0:
        return 1.0, _ln_term(alpha, beta, x, 1.0)
    return k_star, _ln_term(alpha, beta, x, k_star)


def _terms_needed(alpha: float, beta: float, x: float, drop: float = 105.0) -> float:
    """Terms until |term| falls ``drop`` nats below its peak (geometric scan)."""
    if x <= 1.0:
        return 16.0
    k_star, ln_peak = _ln_peak(alpha, beta, x)
    k = max(k_star, 8.0)
    for _ in range(200):
        if _ln_term(alpha, beta, x, k) <= ln_peak - drop:
            return k
        k *= 1.2
    return math.inf


# reciprocal Gamma(alpha*k + beta) values, cached per (alpha, beta) since the
# fitting and spectral paths sweep many arguments at fixed parameters
_MP_RGAMMA_CACHE: dict[tuple[float, float], tuple[int, list]] = {}


def _mp_rgammas(alpha: float, beta: float, dps: int, count: int) -> list:
    key = (alpha, beta)
    cached = _MP_RGAMMA_CACHE.get(key)
    if cached is not None and cached[0] >= dps and len(cached[1]) >= count:
        return cached[1]
    use_dps = max(dps, cached[0] if cached else 0)
    start = 0
    vals: list = []
    if cached is not None and cached[0] >= dps:
        vals = cached[1]
        start = len(vals)
    with mp.workdps(use_dps + 10):
        if start == 0:
            vals = []
        grow_to = max(count, 2 * len(vals), 64)
        # the Gamma argument must be formed in working precision: a float
        # product alpha*k carries rounding that catastrophic cancellation in
        # the series would amplify by the peak-term magnitude
        a_mp = mp.mpf(alpha)
        b_mp = mp.mpf(beta)
        for k in range(start, grow_to):
            vals.append(1 / mp.gamma(a_mp * k + b_mp))
    _MP_RGAMMA_CACHE[key] = (use_dps, vals)
    return vals


@lru_cache(maxsize=4096)
def _series_mp(alpha: float, beta: float, t: float, tol: float, max_terms: int) -> float:
    """Arbitrary-precision series; precision sized from the largest term."""
    x = abs(t)
    _, ln_max = _ln_peak(alpha, beta, x)
    extra_digits = max(0.0, ln_max / math.log(10.0))
    dps = int(min(600.0, 30.0 + 1.2 * extra_digits))
    rg = _mp_rgammas(alpha, beta, dps, 80)
    with mp.workdps(dps):
        ta = mp.mpf(t)
        power = mp.mpf(1)
        total = mp.mpf(0)
        tiny = mp.mpf("1e-300")
        tol_mp = mp.mpf(tol) * mp.mpf("0.25")
        k = 0
        tiny_streak = 0
        while k <= max_terms:
            if k >= len(rg):
                rg = _mp_rgammas(alpha, beta, dps, k + 64)
            term = power * rg[k]
            total += term
            if abs(term) <= tol_mp * max(abs(total), tiny):
                tiny_streak += 1
                if tiny_streak >= 3:
                    break
            else:
                tiny_streak = 0
            power *= ta
            k += 1
        else:
            raise NonConvergenceError(
                f"high-precision Mittag-Leffler series did not converge within "
                f"{max_terms} terms (alpha={alpha}, beta={beta}, t={t})"
            )
        return float(total)


def _asymptotic_negative(alpha: float, x: float, max_j: int = 40):
    """E_{a,1}(-x) ~ sum_j (-1)^{j+1} x^{-j}/Gamma(1-j*a), optimally truncated.

    Returns (value, err_estimate); err_estimate is the first omitted term.
    """
    total = 0.0
    prev = math.inf
    j = 1
    last_used = 0.0
    while j <= max_j:
        mag = x ** (-j) * abs(rgamma(1.0 - j * alpha))
        if mag > prev and j > 3:
            break  # asymptotic terms started growing: stop before this one
        sign = 1.0 if (j % 2 == 1) else -1.0
        total += sign * x ** (-j) * rgamma(1.0 - j * alpha)
        if mag > 0.0:
            prev = mag
        last_used = mag
        j += 1
    # first omitted term (or the last used one if the loop exhausted max_j)
    if j <= max_j:
        err = x ** (-j) * abs(rgamma(1.0 - j * alpha))
    else:
        err = last_used
    return total, err


def mittag_leffler(p: MLParams, t: float, policy: EvalPolicy | None = None) -> float:
    """Evaluate E_{alpha,beta}(t) for real t.

    Relative accuracy: ~1e-13 in the series regime (escalating to arbitrary
    precision under cancellation), and at least 1e-6 on the large-negative
    asymptotic branch for beta = 1.

    Raises
    ------
    NonConvergenceError
        If no evaluation route can certify the tolerance within budget.
    OverflowError
        If the value exceeds the float64 range.
    """
    if policy is None:
        policy = _DEFAULT_POLICY
    alpha, beta = p.alpha, p.beta
    t = float(t)
    if t == 0.0:
        return rgamma(beta)

    tol = max(policy.series_tol, 1e-15)
    x = abs(t)
    feasible = _terms_needed(alpha, beta, x) <= policy.max_terms

    if t > 0.0:
        if _ln_peak(alpha, beta, x)[1] > 709.0:
            # all terms positive, so the peak term alone overflows the result
            raise OverflowError(
                f"mittag_leffler({alpha}, {beta})({t}) exceeds float range"
            )
        if not feasible:
            raise NonConvergenceError(
                f"Mittag-Leffler series for E_({alpha},{beta})({t}) needs more "
                f"than max_terms={policy.max_terms} terms"
            )
        value, _ = _series_float(alpha, beta, t, policy)
        return value

    # t < 0: try the algebraic expansion first where it applies
    asym_val = None
    if beta == 1.0 and 0.0 < alpha < 1.0 and x >= 4.0:
        val, err = _asymptotic_negative(alpha, x)
        target = 1e-6 if x > policy.asymptotic_threshold else 1e-10
        if abs(val) > 0.0 and err <= target * abs(val):
            asym_val = val
            if x > policy.asymptotic_threshold:
                return asym_val

    if not feasible:
        if asym_val is not None:
            return asym_val
        raise NonConvergenceError(
            f"no accurate evaluation route for E_({alpha},{beta})({t}): the "
            f"series needs more than max_terms={policy.max_terms} terms and "
            f"the large-argument expansion does not certify the tolerance"
        )

    value, ok = _series_float(alpha, beta, t, policy)
    if ok:
        return value
    if asym_val is not None:
        return asym_val
    return _series_mp(alpha, beta, t, tol, policy.max_terms)


def ml_derivative_check(
    alpha: float,
    lam: float,
    t: float,
    policy: EvalPolicy | None = None,
    quad=None,
) -> tuple[float, float]:
    """Eigen-relation probe for the fractional exponential.

    Computes the one-sided fractional derivative of order ``alpha`` of
    u(s) = E_{alpha,1}(lam * (s_+)^alpha) at ``t`` by singular-integral
    quadrature (lhs) and the eigenvalue prediction lam * u(t) (rhs).

    Returns the pair (lhs, rhs); callers assert on their closeness.
    """
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha must lie in (0,1), got {alpha}")
    if lam < 0.0:
        raise ValidationError(f"lam must be >= 0, got {lam}")
    if not t > 0.0:
        raise ValidationError(f"t must be > 0, got {t}")
    # local import: frac_ops depends on this module for gamma/Mittag-Leffler
    from .frac_ops import MittagLefflerPower, marchaud_derivative

    u = MittagLefflerPower(alpha=alpha, lam=lam)
    lhs = marchaud_derivative(u, alpha, t, quad)
    rhs = lam * mittag_leffler(MLParams(alpha, 1.0), lam * t**alpha, policy)
    return lhs, rhs
