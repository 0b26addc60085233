"""Exceptions for the architecture model."""

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from .architecture import Violation


class ModelError(Exception):
    """Base class for architecture model errors."""


class ModelParseError(ModelError):
    """The model document is not valid JSON or does not match the model format.

    Args:
        message (str): Human readable description
        line (int | None): Line of a JSON syntax error
        column (int | None): Column of a JSON syntax error
        fields (dict[str, Any] | None): Field errors keyed by field path

    """

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        fields: dict[str, Any] | None = None,
    ):
        self.line = line
        self.column = column
        self.fields = fields or {}
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ModelValidationError(ModelError):
    """The model parsed but violates one or more architecture invariants."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        listing = "; ".join(str(violation) for violation in violations)
        super().__init__(f"{len(violations)} violation(s): {listing}")


class UnknownElementError(ModelError, KeyError):
    """Raised when an element id is not part of the architecture."""

    def __str__(self) -> str:
        return Exception.__str__(self)
