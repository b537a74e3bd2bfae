"""Exception and warning types shared across the package."""


class DGWError(Exception):
    """Base class for all package errors."""


class ParameterError(DGWError, ValueError):
    """An argument violates a documented precondition."""


class StabilityError(ParameterError):
    """A wave scale violates ``s * lambda_max < 4``."""


class NumericError(DGWError, ArithmeticError):
    """A numerical routine failed (non-convergence, NaN, inconsistency)."""


class SolverDivergenceError(NumericError):
    """The sparse solver produced a non-finite objective."""


class NoEventError(DGWError):
    """The coefficient tensor is identically zero."""


class DisconnectedGraphWarning(UserWarning):
    pass


class FrameWarning(UserWarning):
    """The frame property or the periodic-time approximation is not guaranteed."""


class NoiseWarning(UserWarning):
    pass
