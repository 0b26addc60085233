"""Architecture model: elements, validation, instance catalog and model files."""

from .architecture import (
    Architecture,
    Component,
    ElementKind,
    InstanceType,
    Link,
    Node,
    Operation,
    Scenario,
    Violation,
    component_affinity,
    element_degrees,
    validate,
)
from .catalog import DEFAULT_CATALOG, default_catalog
from .exc import ModelError, ModelParseError, ModelValidationError, UnknownElementError
from .schema import (
    dump_architecture,
    fixture_path,
    load_architecture,
    load_fixture,
    loads_architecture,
    save_architecture,
)

__all__ = [
    "Architecture",
    "Component",
    "DEFAULT_CATALOG",
    "ElementKind",
    "InstanceType",
    "Link",
    "ModelError",
    "ModelParseError",
    "ModelValidationError",
    "Node",
    "Operation",
    "Scenario",
    "UnknownElementError",
    "Violation",
    "component_affinity",
    "default_catalog",
    "dump_architecture",
    "element_degrees",
    "fixture_path",
    "load_architecture",
    "load_fixture",
    "loads_architecture",
    "save_architecture",
    "validate",
]
