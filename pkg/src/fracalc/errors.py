"""Exception hierarchy shared by all fracalc modules."""


class FracalcError(Exception):
    """Base class for fracalc errors."""


class ValidationError(FracalcError, ValueError):
    """A parameter violates a documented precondition or invariant."""


class PoleError(FracalcError, ValueError):
    """Gamma evaluated at a non-positive integer."""


class NonConvergenceError(FracalcError, ArithmeticError):
    """A series or iteration hit its budget before reaching tolerance."""


class TailDivergenceError(FracalcError, ValueError):
    """The operand's tail model makes the requested integral divergent."""


class RangeError(FracalcError, ValueError):
    """Evaluation point falls outside the representable domain of an operand."""


class StabilityError(FracalcError, ArithmeticError):
    """A time-stepping scheme left its stability region; reported, never clamped."""


class GridResolutionError(FracalcError, ArithmeticError):
    """A spectral or spatial grid failed its internal accuracy self-check."""


class ExtrapolationError(FracalcError, ArithmeticError):
    """Trace extrapolation levels disagree beyond the allowed spread."""


class MemoryBudgetError(FracalcError, MemoryError):
    """Requested ensemble statistics would exceed the configured memory cap."""


class BinningError(FracalcError, ValueError):
    """Histogram support and reference profile grid do not overlap."""
