"""Exception types shared by all modules.

The CLI maps these onto exit codes: invalid inputs (DomainError,
RegimeError) exit with status 2, numerical failures (AccuracyError)
with status 3.
"""


class DomainError(ValueError):
    """An argument violates a mathematical precondition (divergent
    integral, parameter outside the admissible range, evaluation at or
    beyond the blow-up boundary)."""


class RegimeError(ValueError):
    """An operation was invoked outside the parameter regime in which
    the quantity it computes exists (e.g. the fold point of a function
    with no interior critical point)."""


class AccuracyError(RuntimeError):
    """A numerical routine could not reach the requested accuracy.

    Carries the best available estimate so callers may still inspect
    the partial result.
    """

    def __init__(self, message, value=None, error_estimate=None, evaluations=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations
