"""fracalc: one-sided fractional calculus with memory-effect applications.

Subpackages
-----------
special_fn   Gamma and Mittag-Leffler evaluation
frac_ops     Marchaud-Weyl derivative / Weyl integral on history functions
relaxation   fractional growth/decay with prescribed history
fitting      growth-model parameter fits (classical vs fractional)
visco        power-law viscoelastic stress responses
ctrw         continuous-time random walk Monte Carlo
diffusion    fundamental solutions of (time-fractional) diffusion
extension    degenerate local PDE characterisation of the derivative
cli          command-line front end (``fracalc`` entry point)
"""

from .errors import (
    BinningError,
    ExtrapolationError,
    FracalcError,
    GridResolutionError,
    MemoryBudgetError,
    NonConvergenceError,
    PoleError,
    RangeError,
    StabilityError,
    TailDivergenceError,
    ValidationError,
)
from .frac_ops import (
    Constant,
    ConstantBefore,
    Exponential,
    FracOrder,
    GridSampled,
    HistoryFunction,
    MittagLefflerPower,
    ModifiedPower,
    PowerDecay,
    PowerPlus,
    QuadratureSpec,
    ZeroBefore,
    composite_derivative,
    consistency_limit_probe,
    frac_coefficient,
    ftfc_roundtrip,
    marchaud_derivative,
    right_derivative,
    weyl_integral,
)
from .special_fn import EvalPolicy, MLParams, gamma, mittag_leffler, ml_derivative_check

__version__ = "0.1.0"

__all__ = [
    "BinningError",
    "ExtrapolationError",
    "FracalcError",
    "GridResolutionError",
    "MemoryBudgetError",
    "NonConvergenceError",
    "PoleError",
    "RangeError",
    "StabilityError",
    "TailDivergenceError",
    "ValidationError",
    "Constant",
    "ConstantBefore",
    "Exponential",
    "FracOrder",
    "GridSampled",
    "HistoryFunction",
    "MittagLefflerPower",
    "ModifiedPower",
    "PowerDecay",
    "PowerPlus",
    "QuadratureSpec",
    "ZeroBefore",
    "composite_derivative",
    "consistency_limit_probe",
    "frac_coefficient",
    "ftfc_roundtrip",
    "marchaud_derivative",
    "right_derivative",
    "weyl_integral",
    "EvalPolicy",
    "MLParams",
    "gamma",
    "mittag_leffler",
    "ml_derivative_check",
    "__version__",
]
