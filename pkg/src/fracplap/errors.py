"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid problem parameter or grid specification."""


class GridMismatchError(ValueError):
    """Fields / weights built on different grids were combined."""


class ConvergenceFailure(RuntimeError):
    """An iterative solve ran out of its iteration budget.

    Carries whatever partial result is useful to the caller: the
    solver report for a single elliptic step, or the partial
    trajectory for a time march.
    """

    def __init__(self, message, report=None, partial=None):
        super().__init__(message)
        self.report = report
        self.partial = partial
