"""Refactoring actions: types, preconditions, application and sampling."""

from .actions import (
    MAX_SEQUENCE_LENGTH,
    ActionKind,
    RefactoringAction,
    RefactoringActionSchema,
    RefactoringSequence,
    dump_sequence,
    load_sequence,
    read_sequence,
)
from .engine import (
    MAX_REPAIR_ATTEMPTS,
    ActionContext,
    SequenceOutcome,
    apply,
    apply_sequence,
    context_of,
    precheck,
    random_action,
    random_sequence,
    repair,
)
from .exc import (
    ActionSamplingError,
    InfeasibleSequenceError,
    MalformedActionError,
    PreconditionError,
    RefactoringError,
)

__all__ = [
    "ActionContext",
    "ActionKind",
    "ActionSamplingError",
    "InfeasibleSequenceError",
    "MAX_REPAIR_ATTEMPTS",
    "MAX_SEQUENCE_LENGTH",
    "MalformedActionError",
    "PreconditionError",
    "RefactoringAction",
    "RefactoringActionSchema",
    "RefactoringError",
    "RefactoringSequence",
    "SequenceOutcome",
    "apply",
    "apply_sequence",
    "context_of",
    "dump_sequence",
    "load_sequence",
    "precheck",
    "random_action",
    "random_sequence",
    "read_sequence",
    "repair",
]
