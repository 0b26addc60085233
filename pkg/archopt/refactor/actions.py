"""Refactoring action and sequence types and their JSON form."""

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator, overload

from marshmallow import Schema, ValidationError, fields, post_load

from archopt.model import ElementKind

from .exc import MalformedActionError

MAX_SEQUENCE_LENGTH = 4


class ActionKind(str, enum.Enum):
    """Refactoring action types."""

    REDO = "REDO"
    MOVE = "MOVE"
    CLON = "CLON"
    MOTN = "MOTN"
    DROP = "DROP"

    @property
    def target_kind(self) -> ElementKind:
        """Kind of element the action targets."""
        if self is ActionKind.REDO:
            return ElementKind.COMPONENT
        if self in (ActionKind.MOVE, ActionKind.MOTN):
            return ElementKind.OPERATION
        return ElementKind.NODE

    @property
    def destination_kind(self) -> ElementKind | None:
        """Kind of element the target ends up in, if the action relocates it."""
        if self is ActionKind.MOVE:
            return ElementKind.COMPONENT
        if self in (ActionKind.REDO, ActionKind.MOTN):
            return ElementKind.NODE
        return None


@dataclass(frozen=True)
class RefactoringAction:
    """A typed refactoring action.

    Args:
        kind (ActionKind): Action type
        target (str): Component (REDO), operation (MOVE, MOTN) or node (CLON, DROP)
        destination (str | None): Destination component, MOVE only
        new_instance (str | None): Instance type of the created node, REDO and MOTN
            only

    Raises:
        MalformedActionError: If the optional fields do not match the kind

    """

    kind: ActionKind
    target: str
    destination: str | None = None
    new_instance: str | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ActionKind(self.kind))
        except ValueError as err:
            raise MalformedActionError(f"Unknown action kind: {self.kind}") from err
        needs_destination = self.kind is ActionKind.MOVE
        needs_instance = self.kind in (ActionKind.REDO, ActionKind.MOTN)
        if (self.destination is not None) != needs_destination:
            raise MalformedActionError(
                f"{self.kind.value} {'requires' if needs_destination else 'forbids'}"
                " a destination"
            )
        if (self.new_instance is not None) != needs_instance:
            raise MalformedActionError(
                f"{self.kind.value} {'requires' if needs_instance else 'forbids'}"
                " a new instance type"
            )

    def __str__(self) -> str:
        suffix = ""
        if self.destination is not None:
            suffix = f" -> {self.destination}"
        elif self.new_instance is not None:
            suffix = f" @ {self.new_instance}"
        return f"{self.kind.value}({self.target}{suffix})"


@dataclass(frozen=True)
class RefactoringSequence:
    """Ordered refactoring actions, the chromosome of the search.

    Args:
        actions (tuple[RefactoringAction, ...]): The actions, applied left to right
        max_length (int): Maximum number of actions

    """

    actions: tuple[RefactoringAction, ...] = ()
    max_length: int = field(default=MAX_SEQUENCE_LENGTH, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.actions) > self.max_length:
            raise MalformedActionError(
                f"Sequence of {len(self.actions)} actions exceeds {self.max_length}"
            )

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self) -> Iterator[RefactoringAction]:
        return iter(self.actions)

    @overload
    def __getitem__(self, index: int) -> RefactoringAction: ...

    @overload
    def __getitem__(self, index: slice) -> tuple[RefactoringAction, ...]: ...

    def __getitem__(self, index):
        return self.actions[index]

    def __str__(self) -> str:
        return "[" + ", ".join(str(action) for action in self.actions) + "]"


class RefactoringActionSchema(Schema):
    """Action schema."""

    kind = fields.Enum(ActionKind, by_value=True, required=True)
    target = fields.Str(required=True)
    destination = fields.Str(load_default=None, allow_none=True)
    new_instance = fields.Str(load_default=None, allow_none=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> RefactoringAction:
        """Build the action."""
        # pylint: disable=unused-argument
        try:
            return RefactoringAction(**data)
        except MalformedActionError as err:
            raise ValidationError(str(err)) from err


def dump_sequence(seq: RefactoringSequence) -> list[dict[str, Any]]:
    """JSON-compatible form of a sequence."""
    return RefactoringActionSchema(many=True).dump(seq.actions)


def load_sequence(
    data: list[dict[str, Any]], max_length: int = MAX_SEQUENCE_LENGTH
) -> RefactoringSequence:
    """Build a sequence from its JSON-compatible form.

    Raises:
        MalformedActionError: If an action is malformed or the sequence is too long

    """
    try:
        actions = RefactoringActionSchema(many=True).load(data)
    except ValidationError as err:
        raise MalformedActionError(f"Invalid action list: {err.messages}") from err
    return RefactoringSequence(tuple(actions), max_length)


def read_sequence(
    path: str | Path, max_length: int = MAX_SEQUENCE_LENGTH
) -> RefactoringSequence:
    """Read a sequence file holding a JSON list of actions."""
    return load_sequence(json.loads(Path(path).read_text(encoding="utf-8")), max_length)
