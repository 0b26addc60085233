"""Marshmallow schemas reading and writing the JSON model format."""

import json
from importlib import resources
from pathlib import Path
from typing import Any

from marshmallow import Schema, ValidationError, fields, post_load

from .architecture import (
    Architecture,
    Component,
    InstanceType,
    Link,
    Node,
    Operation,
    Scenario,
    validate,
)
from .exc import ModelParseError, ModelValidationError

# pylint: disable=too-few-public-methods,unused-argument


class InstanceTypeSchema(Schema):
    """Instance type schema."""

    name = fields.Str(required=True)
    speed_factor = fields.Float(required=True, allow_nan=False)
    power_max = fields.Float(required=True, allow_nan=False)
    cost = fields.Float(required=True, allow_nan=False)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> InstanceType:
        """Build the instance type."""
        return InstanceType(**data)


class NodeSchema(Schema):
    """Node schema."""

    id = fields.Str(required=True)
    instance = fields.Str(required=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Node:
        """Build the node."""
        return Node(**data)


class ComponentSchema(Schema):
    """Component schema."""

    id = fields.Str(required=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Component:
        """Build the component."""
        return Component(**data)


class OperationSchema(Schema):
    """Operation schema."""

    id = fields.Str(required=True)
    owner = fields.Str(required=True)
    demand = fields.Float(required=True, allow_nan=False)
    replica_of = fields.Str(load_default=None, allow_none=True)
    weight = fields.Float(load_default=1.0, allow_nan=False)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Operation:
        """Build the operation."""
        return Operation(**data)


class LinkSchema(Schema):
    """Link schema."""

    a = fields.Str(required=True)
    b = fields.Str(required=True)
    latency = fields.Float(load_default=0.0, allow_nan=False)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Link:
        """Build the link."""
        return Link(**data)


class ScenarioSchema(Schema):
    """Scenario schema."""

    id = fields.Str(required=True)
    arrival_rate = fields.Float(required=True, allow_nan=False)
    steps = fields.List(fields.Str(), required=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Scenario:
        """Build the scenario."""
        return Scenario(data["id"], data["arrival_rate"], tuple(data["steps"]))


class ArchitectureSchema(Schema):
    """Schema of a complete model document."""

    catalog = fields.List(fields.Nested(InstanceTypeSchema), required=True)
    nodes = fields.List(fields.Nested(NodeSchema), required=True)
    components = fields.List(fields.Nested(ComponentSchema), required=True)
    operations = fields.List(fields.Nested(OperationSchema), required=True)
    links = fields.List(fields.Nested(LinkSchema), load_default=list)
    deployment = fields.Dict(keys=fields.Str(), values=fields.Str(), required=True)
    scenarios = fields.List(fields.Nested(ScenarioSchema), required=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Architecture:
        """Build the architecture, unvalidated."""
        return Architecture(
            catalog=tuple(data["catalog"]),
            nodes=tuple(data["nodes"]),
            components=tuple(data["components"]),
            operations=tuple(data["operations"]),
            links=tuple(data["links"]),
            deployment=dict(data["deployment"]),
            scenarios=tuple(data["scenarios"]),
        )


def loads_architecture(text: str) -> Architecture:
    """Parse and validate a model document.

    Args:
        text (str): The JSON document

    Returns:
        Architecture: The validated architecture

    Raises:
        ModelParseError: If the text is not JSON or does not match the format
        ModelValidationError: If the model violates any invariant; every violation
            is listed, not only the first

    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as err:
        raise ModelParseError(err.msg, line=err.lineno, column=err.colno) from err
    try:
        arch = ArchitectureSchema().load(document)
    except ValidationError as err:
        messages = err.messages if isinstance(err.messages, dict) else {}
        raise ModelParseError(
            f"Invalid model document: {err.messages}", fields=messages
        ) from err
    if violations := validate(arch):
        raise ModelValidationError(violations)
    return arch


def load_architecture(path: str | Path) -> Architecture:
    """Read, parse and validate a model file."""
    return loads_architecture(Path(path).read_text(encoding="utf-8"))


def dump_architecture(arch: Architecture) -> dict[str, Any]:
    """Canonical JSON-compatible form of an architecture."""
    return ArchitectureSchema().dump(arch)


def save_architecture(arch: Architecture, path: str | Path) -> None:
    """Write an architecture in canonical form."""
    Path(path).write_text(
        json.dumps(dump_architecture(arch), indent=2) + "\n", encoding="utf-8"
    )


def fixture_path() -> Path:
    """Path to the bundled TTBS-like model."""
    return Path(str(resources.files("archopt") / "data" / "ttbs.json"))


def load_fixture() -> Architecture:
    """Load the bundled TTBS-like model.

    Its operation demands are synthetic; they are not calibrated on a running
    system.

    """
    return load_architecture(fixture_path())
