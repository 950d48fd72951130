"""Exception and warning types shared across the package."""


class ShiftDilateError(Exception):
    """Base class for all library errors."""


class SignalsNotSubmultiplicative(ShiftDilateError):
    """The operation needs a submultiplicative weight (exponent >= 0)."""


class GridMismatch(ShiftDilateError):
    """Operands live on different grids, or dimensions disagree."""


class FunctionSpecError(ShiftDilateError):
    """Malformed function-spec expression; the message cites the offending token."""


class NormSpecError(ShiftDilateError):
    """Malformed or inconsistent norm descriptor."""


class OffGridShift(ShiftDilateError):
    """Translation by a non-grid-aligned offset without interpolate=True."""


class WindowZeroMean(ShiftDilateError):
    """The window integrates to (numerically) zero; the scheme needs a
    window whose transform does not vanish at the origin."""


class TruncationInfeasible(ShiftDilateError):
    """The plateau cutoff cannot reach the requested truncation error."""

    def __init__(self, message, achieved):
        super().__init__(message)
        self.achieved = achieved


class BudgetInfeasible(ShiftDilateError):
    """No ladder point met the stage budget.

    Attributes
    ----------
    achieved : float
        Best (smallest) stage error reached while scanning.
    parameter : float
        Ladder value at which `achieved` occurred.
    """

    def __init__(self, message, achieved, parameter):
        super().__init__(message)
        self.achieved = achieved
        self.parameter = parameter
        # stage errors known at the time of failure (set by the pipeline)
        self.partial_report = None


class SupportOverflowWarning(UserWarning):
    """Convolution mass leaked outside the representable grid window."""
