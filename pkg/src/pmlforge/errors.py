"""Exception hierarchy shared by all pmlforge modules."""


class PMLForgeError(Exception):
    """Base class for every error raised by pmlforge."""


class DegreeError(PMLForgeError, ValueError):
    """Polynomial degree exceeds the double-precision cap."""


class PoleError(PMLForgeError, ZeroDivisionError):
    """A map was sampled at (or numerically on top of) one of its poles."""


class ConvergenceError(PMLForgeError, RuntimeError):
    """An iterative solver failed to converge.

    ``trace`` holds whatever per-iteration diagnostics the solver recorded.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class BreakdownError(PMLForgeError, ArithmeticError):
    """Continued-fraction extraction hit a vanishing leading coefficient."""

    def __init__(self, message, stage=None):
        if stage is not None:
            message = f"{message} (stage {stage})"
        super().__init__(message)
        self.stage = stage


class DegenerateError(PMLForgeError, ValueError):
    """Odd and even parts share a common factor."""
