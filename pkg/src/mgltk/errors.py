"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation hit a point where the expression is singular."""


class ConvergenceError(RuntimeError):
    """An iterative solver exhausted its budget without converging."""


class HypothesisViolationError(RuntimeError):
    """A scan's precondition (a required convexity hypothesis) failed."""
