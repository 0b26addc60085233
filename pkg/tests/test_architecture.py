"""Test the architecture model and its validation."""

import math
from dataclasses import replace

import pytest

from archopt.model import (
    Architecture,
    ElementKind,
    Link,
    Node,
    Operation,
    Scenario,
    UnknownElementError,
    component_affinity,
    element_degrees,
    load_fixture,
    validate,
)
from tests import _dict_to_params
from tests.factories import tiny_architecture, two_node_architecture

# pylint: disable=missing-function-docstring,redefined-outer-name


@pytest.fixture(scope="module")
def fixture_arch() -> Architecture:
    return load_fixture()


class TestValidate:
    """Test model validation."""

    def test_fixture_is_valid(self, fixture_arch: Architecture):
        assert not validate(fixture_arch)

    def test_factories_are_valid(self):
        assert not validate(tiny_architecture())
        assert not validate(two_node_architecture())

    @pytest.mark.parametrize(
        "changes, rule",
        **_dict_to_params(
            {
                "dangling deployment": (
                    {"deployment": {"c1": "n9"}},
                    "deployment to unknown node",
                ),
                "undeployed component": ({"deployment": {}}, "undeployed component"),
                "unknown instance": (
                    {"nodes": (Node("n1", "z9.huge"),)},
                    "unknown instance type",
                ),
                "negative demand": (
                    {"operations": (Operation("op1", "c1", -1.0),)},
                    "negative demand",
                ),
                "nan demand": (
                    {"operations": (Operation("op1", "c1", math.nan),)},
                    "non-finite value",
                ),
                "unknown owner": (
                    {"operations": (Operation("op1", "c9", 1.0),)},
                    "unknown operation owner",
                ),
                "dangling step": (
                    {"scenarios": (Scenario("s1", 1.0, ("nope",)),)},
                    "dangling operation reference",
                ),
                "empty scenario": (
                    {"scenarios": (Scenario("s1", 1.0, ()),)},
                    "empty scenario",
                ),
                "negative rate": (
                    {"scenarios": (Scenario("s1", -1.0, ("op1",)),)},
                    "invalid arrival rate",
                ),
                "self link": ({"links": (Link("n1", "n1"),)}, "self link"),
                "link to nowhere": (
                    {"links": (Link("n1", "n7"),)},
                    "link to unknown node",
                ),
                "negative latency": (
                    {"links": (Link("n1", "n1", -1.0),)},
                    "invalid latency",
                ),
                "no nodes": ({"nodes": ()}, "no nodes"),
                "partial replica share": (
                    {"operations": (Operation("op1", "c1", 1.0, weight=0.5),)},
                    "replica shares do not sum to one",
                ),
            }
        ),
    )
    def test_violation_is_reported(self, changes: dict, rule: str):
        violations = validate(replace(tiny_architecture(), **changes))
        assert rule in {violation.rule for violation in violations}

    def test_every_violation_is_reported(self):
        arch = replace(
            tiny_architecture(),
            deployment={"c1": "n9"},
            scenarios=(Scenario("s1", 1.0, ("nope",)),),
        )
        rules = {violation.rule for violation in validate(arch)}
        assert rules == {"deployment to unknown node", "dangling operation reference"}

    def test_duplicate_links_are_reported_whatever_the_endpoint_order(self):
        arch = replace(
            two_node_architecture(), links=(Link("n1", "n2"), Link("n2", "n1"))
        )
        assert [v.rule for v in validate(arch)] == ["duplicate link"]

    def test_violation_string_names_rule_element_and_detail(self):
        arch = replace(tiny_architecture(), deployment={"c1": "n9"})
        assert str(validate(arch)[0]) == "deployment to unknown node: c1 (n9)"


class TestLink:
    """Test undirected links."""

    def test_endpoints_are_normalized(self):
        assert Link("b", "a") == Link("a", "b")
        assert Link("b", "a").key == ("a", "b")

    def test_other_endpoint(self):
        link = Link("n2", "n1", 3.0)
        assert link.other("n1") == "n2"
        assert link.other("n2") == "n1"
        assert link.touches("n1") and not link.touches("n3")


class TestArchitecture:
    """Test architecture lookups."""

    def test_lookups(self, fixture_arch: Architecture):
        assert fixture_arch.processor_of("verifyCode") == "verification"
        assert fixture_arch.instance_of("login").name == "m6i.xlarge"
        assert fixture_arch.components_on("sso") == ("sso",)
        assert fixture_arch.neighbors("sso") == ("login", "user")
        assert fixture_arch.link_between("sso", "login") == Link("login", "sso", 2.0)
        assert fixture_arch.link_between("sso", "seat") is None

    def test_used_nodes_skip_empty_nodes(self):
        arch = replace(two_node_architecture(), deployment={"c1": "n1", "c2": "n1"})
        assert [node.id for node in arch.used_nodes] == ["n1"]

    def test_node_of_unknown_component_raises(self, fixture_arch: Architecture):
        with pytest.raises(UnknownElementError, match="nope"):
            fixture_arch.node_of("nope")

    def test_step_pairs_expand_replicas(self):
        arch = replace(
            two_node_architecture(),
            operations=(
                Operation("a", "c1", 10.0),
                Operation("b", "c2", 20.0, weight=0.5),
                Operation("b-copy", "c1", 20.0, replica_of="b", weight=0.5),
            ),
        )
        assert not validate(arch)
        pairs = [
            (first.id, second.id, share)
            for _, first, second, share in arch.step_pairs()
        ]
        assert pairs == [("a", "b", 0.5), ("a", "b-copy", 0.5)]


class TestComponentAffinity:
    """Test rate-weighted message counts."""

    def test_fixture_affinity(self, fixture_arch: Architecture):
        assert component_affinity(fixture_arch, "verification") == {
            "login": 20.0,
            "sso": 20.0,
        }
        assert component_affinity(fixture_arch, "sso") == {
            "verification": 20.0,
            "login": 9.0,
            "user": 5.0,
            "order-other": 4.0,
        }

    def test_unused_component_has_no_affinity(self, fixture_arch: Architecture):
        assert not component_affinity(fixture_arch, "notification")

    def test_co_located_traffic_does_not_count(self):
        arch = replace(two_node_architecture(), deployment={"c1": "n1", "c2": "n1"})
        assert not component_affinity(arch, "c1")

    def test_unknown_component_raises(self, fixture_arch: Architecture):
        with pytest.raises(UnknownElementError):
            component_affinity(fixture_arch, "nope")


class TestElementDegrees:
    """Test element degrees."""

    def test_node_degrees(self, fixture_arch: Architecture):
        degrees = element_degrees(fixture_arch, ElementKind.NODE)
        assert degrees["login"] == 3
        assert degrees["notification"] == 1
        assert len(degrees) == 12

    def test_component_degrees_count_co_residents(self):
        arch = replace(two_node_architecture(), deployment={"c1": "n1", "c2": "n1"})
        assert element_degrees(arch, ElementKind.COMPONENT) == {"c1": 2, "c2": 2}

    def test_operation_degrees(self):
        degrees = element_degrees(two_node_architecture(), ElementKind.OPERATION)
        assert degrees == {"a": 1, "b": 1}
