"""Exception taxonomy shared by the whole package.

Two failure modes are distinguished so that harnesses can react
differently: bad inputs (ValidationError) versus honest numerical
failure of an iterative method (NumericalFailure).  The command line
front end maps them to exit codes 1 and 2 respectively.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition or invariant."""


class NumericalFailure(RuntimeError):
    """An iterative routine did not reach its tolerance.

    Carries the best residual seen, when one is available, so callers
    can retry with a larger budget.
    """

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual
