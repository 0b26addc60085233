"""Exceptions for refactoring actions."""

from archopt.model import Violation


class RefactoringError(Exception):
    """Base class for refactoring errors."""


class MalformedActionError(RefactoringError, ValueError):
    """The fields of an action or sequence do not match its shape."""


class PreconditionError(RefactoringError):
    """An action was applied to an architecture that violates its preconditions."""

    def __init__(self, violation: Violation):
        self.violation = violation
        super().__init__(str(violation))


class InfeasibleSequenceError(RefactoringError):
    """An action of a sequence failed its preconditions.

    Args:
        index (int): Position of the first failing action
        violation (Violation): The violated precondition

    """

    def __init__(self, index: int, violation: Violation):
        self.index = index
        self.violation = violation
        super().__init__(f"action {index} is infeasible: {violation}")


class ActionSamplingError(RefactoringError):
    """No applicable action was found within the sampling budget."""
