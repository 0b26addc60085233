"""Architecture description with static, dynamic and deployment views in one model.

An :class:`Architecture` is immutable once built. Refactoring actions never change
an instance in place, they build a new one with :func:`dataclasses.replace`.
"""

import enum
import functools
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Mapping

from .exc import UnknownElementError


class ElementKind(str, enum.Enum):
    """Kinds of architectural elements, labeled as in action reports."""

    NODE = "N"
    COMPONENT = "C"
    OPERATION = "O"


@dataclass(frozen=True)
class InstanceType:
    """Cloud instance type.

    Args:
        name (str): Instance type name, unique within a catalog
        speed_factor (float): CPU speed multiplier dividing operation demands
        power_max (float): Power in Watts when fully utilized
        cost (float): Hourly cost in USD

    """

    name: str
    speed_factor: float
    power_max: float
    cost: float


@dataclass(frozen=True)
class Node:
    """Deployment node running one instance type."""

    id: str
    instance: str


@dataclass(frozen=True)
class Component:
    """Deployable software component."""

    id: str


@dataclass(frozen=True)
class Operation:
    """Operation owned by a component.

    Args:
        id (str): Operation id
        owner (str): Id of the owning component
        demand (float): CPU milliseconds per invocation at speed factor 1.0
        replica_of (str | None): Id of the operation this one replicates
        weight (float): Share of the traffic addressed to the origin operation that
            this copy serves

    """

    id: str
    owner: str
    demand: float
    replica_of: str | None = None
    weight: float = 1.0

    @property
    def origin(self) -> str:
        """Id of the operation scenario steps refer to."""
        return self.replica_of or self.id


@dataclass(frozen=True)
class Link:
    """Undirected connection between two nodes.

    The endpoints are stored in lexicographic order, so ``Link("b", "a")`` equals
    ``Link("a", "b")``.

    """

    a: str
    b: str
    latency: float = 0.0

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def key(self) -> tuple[str, str]:
        """Endpoint pair identifying the link."""
        return (self.a, self.b)

    def touches(self, node_id: str) -> bool:
        """Whether ``node_id`` is one of the endpoints."""
        return node_id in (self.a, self.b)

    def other(self, node_id: str) -> str:
        """The endpoint opposite to ``node_id``."""
        return self.b if node_id == self.a else self.a


@dataclass(frozen=True)
class Scenario:
    """Request type: an arrival rate (requests/s) and an ordered call flow."""

    id: str
    arrival_rate: float
    steps: tuple[str, ...]


@dataclass(frozen=True)
class Violation:
    """A broken model or action constraint.

    Args:
        element (str): Id of the offending element
        rule (str): Name of the violated rule
        detail (str): Optional extra context

    """

    element: str
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.rule}: {self.element}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class Architecture:  # pylint: disable=too-many-instance-attributes
    """Complete architecture model.

    Args:
        catalog (tuple[InstanceType, ...]): Instance types nodes may use
        nodes (tuple[Node, ...]): Deployment nodes
        components (tuple[Component, ...]): Software components
        operations (tuple[Operation, ...]): Operations and their demands
        links (tuple[Link, ...]): Network links between nodes
        deployment (Mapping[str, str]): Component id to node id
        scenarios (tuple[Scenario, ...]): Request types

    """

    catalog: tuple[InstanceType, ...]
    nodes: tuple[Node, ...]
    components: tuple[Component, ...]
    operations: tuple[Operation, ...]
    links: tuple[Link, ...]
    deployment: Mapping[str, str]
    scenarios: tuple[Scenario, ...]

    @functools.cached_property
    def instance_map(self) -> dict[str, InstanceType]:
        """Instance types by name."""
        return {instance.name: instance for instance in self.catalog}

    @functools.cached_property
    def node_map(self) -> dict[str, Node]:
        """Nodes by id."""
        return {node.id: node for node in self.nodes}

    @functools.cached_property
    def component_map(self) -> dict[str, Component]:
        """Components by id."""
        return {component.id: component for component in self.components}

    @functools.cached_property
    def operation_map(self) -> dict[str, Operation]:
        """Operations by id."""
        return {operation.id: operation for operation in self.operations}

    @functools.cached_property
    def scenario_map(self) -> dict[str, Scenario]:
        """Scenarios by id."""
        return {scenario.id: scenario for scenario in self.scenarios}

    @functools.cached_property
    def _replica_groups(self) -> dict[str, tuple[Operation, ...]]:
        groups: dict[str, list[Operation]] = defaultdict(list)
        for operation in self.operations:
            groups[operation.origin].append(operation)
        return {origin: tuple(group) for origin, group in groups.items()}

    @functools.cached_property
    def _hosted(self) -> dict[str, tuple[str, ...]]:
        hosted: dict[str, list[str]] = defaultdict(list)
        for component in self.components:
            if component.id in self.deployment:
                hosted[self.deployment[component.id]].append(component.id)
        return {node: tuple(sorted(ids)) for node, ids in hosted.items()}

    @functools.cached_property
    def _adjacency(self) -> dict[str, dict[str, Link]]:
        adjacency: dict[str, dict[str, Link]] = defaultdict(dict)
        for link in self.links:
            adjacency[link.a][link.b] = link
            adjacency[link.b][link.a] = link
        return adjacency

    def node_of(self, component_id: str) -> str:
        """Id of the node hosting a component."""
        try:
            return self.deployment[component_id]
        except KeyError as err:
            raise UnknownElementError(f"Undeployed component: {component_id}") from err

    def processor_of(self, operation_id: str) -> str:
        """Id of the node an operation executes on."""
        return self.node_of(self.operation_map[operation_id].owner)

    def instance_of(self, node_id: str) -> InstanceType:
        """Instance type of a node."""
        return self.instance_map[self.node_map[node_id].instance]

    def components_on(self, node_id: str) -> tuple[str, ...]:
        """Ids of the components deployed on a node, sorted."""
        return self._hosted.get(node_id, ())

    def operations_of(self, component_id: str) -> tuple[Operation, ...]:
        """Operations owned by a component."""
        return tuple(op for op in self.operations if op.owner == component_id)

    def replicas(self, operation_id: str) -> tuple[Operation, ...]:
        """The operation serving a scenario step together with all its replicas."""
        return self._replica_groups.get(operation_id, ())

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        """Ids of the nodes directly linked to a node, sorted."""
        return tuple(sorted(self._adjacency.get(node_id, {})))

    def links_of(self, node_id: str) -> tuple[Link, ...]:
        """Links touching a node."""
        return tuple(link for link in self.links if link.touches(node_id))

    def link_between(self, a: str, b: str) -> Link | None:
        """The direct link between two nodes, if any."""
        return self._adjacency.get(a, {}).get(b)

    @property
    def used_nodes(self) -> tuple[Node, ...]:
        """Nodes hosting at least one component."""
        return tuple(node for node in self.nodes if self._hosted.get(node.id))

    def step_pairs(self) -> Iterator[tuple[Scenario, Operation, Operation, float]]:
        """Consecutive step pairs of every scenario, expanded over replicas.

        Yields:
            tuple[Scenario, Operation, Operation, float]: The scenario, the calling
            and the called operation, and the share of the scenario's traffic that
            follows this pair

        """
        for scenario in self.scenarios:
            for first, second in itertools.pairwise(scenario.steps):
                for caller in self.replicas(first):
                    for callee in self.replicas(second):
                        yield scenario, caller, callee, caller.weight * callee.weight


def _duplicates(ids: list[str]) -> set[str]:
    seen: set[str] = set()
    repeated: set[str] = set()
    for id_ in ids:
        if id_ in seen:
            repeated.add(id_)
        seen.add(id_)
    return repeated


def _not_finite(*values: float) -> bool:
    return not all(math.isfinite(value) for value in values)


def validate(arch: Architecture) -> list[Violation]:
    """Check every model invariant.

    Args:
        arch (Architecture): The architecture to check

    Returns:
        list[Violation]: All violations found, empty iff the model is valid

    """
    # pylint: disable=too-many-branches
    violations: list[Violation] = []

    def report(element: str, rule: str, detail: str = ""):
        violations.append(Violation(element, rule, detail))

    for name in sorted(_duplicates([i.name for i in arch.catalog])):
        report(name, "duplicate instance type")
    for instance in arch.catalog:
        if _not_finite(instance.speed_factor, instance.power_max, instance.cost):
            report(instance.name, "non-finite value")
        elif instance.speed_factor <= 0:
            report(instance.name, "non-positive speed factor")
        if instance.power_max < 0:
            report(instance.name, "negative power")
        if instance.cost < 0:
            report(instance.name, "negative cost")

    if not arch.nodes:
        report("<architecture>", "no nodes")
    for id_ in sorted(_duplicates([node.id for node in arch.nodes])):
        report(id_, "duplicate node id")
    for node in arch.nodes:
        if node.instance not in arch.instance_map:
            report(node.id, "unknown instance type", node.instance)

    for id_ in sorted(_duplicates([c.id for c in arch.components])):
        report(id_, "duplicate component id")
    for component in arch.components:
        if component.id not in arch.deployment:
            report(component.id, "undeployed component")
    for component_id, node_id in arch.deployment.items():
        if component_id not in arch.component_map:
            report(component_id, "deployment of unknown component")
        if node_id not in arch.node_map:
            report(component_id, "deployment to unknown node", node_id)

    for id_ in sorted(_duplicates([op.id for op in arch.operations])):
        report(id_, "duplicate operation id")
    for operation in arch.operations:
        if operation.owner not in arch.component_map:
            report(operation.id, "unknown operation owner", operation.owner)
        if _not_finite(operation.demand, operation.weight):
            report(operation.id, "non-finite value")
        elif operation.demand < 0:
            report(operation.id, "negative demand")
        if operation.replica_of is not None:
            origin = arch.operation_map.get(operation.replica_of)
            if origin is None or origin.replica_of is not None:
                report(operation.id, "unknown replica origin", operation.replica_of)
        if not 0 < operation.weight <= 1:
            report(operation.id, "invalid traffic share")
    # pylint: disable-next=protected-access
    for origin, group in arch._replica_groups.items():
        if origin in arch.operation_map and not math.isclose(
            sum(op.weight for op in group), 1.0, abs_tol=1e-9
        ):
            report(origin, "replica shares do not sum to one")

    seen_links: set[tuple[str, str]] = set()
    for link in arch.links:
        label = f"{link.a}-{link.b}"
        if link.a == link.b:
            report(label, "self link")
        if link.key in seen_links:
            report(label, "duplicate link")
        seen_links.add(link.key)
        for endpoint in link.key:
            if endpoint not in arch.node_map:
                report(label, "link to unknown node", endpoint)
        if _not_finite(link.latency) or link.latency < 0:
            report(label, "invalid latency")

    for id_ in sorted(_duplicates([s.id for s in arch.scenarios])):
        report(id_, "duplicate scenario id")
    for scenario in arch.scenarios:
        if _not_finite(scenario.arrival_rate) or scenario.arrival_rate < 0:
            report(scenario.id, "invalid arrival rate")
        if not scenario.steps:
            report(scenario.id, "empty scenario")
        for step in scenario.steps:
            operation = arch.operation_map.get(step)
            if operation is None:
                report(scenario.id, "dangling operation reference", step)
            elif operation.replica_of is not None:
                report(scenario.id, "step refers to a replica", step)
    return violations


def component_affinity(arch: Architecture, component_id: str) -> dict[str, float]:
    """Rate-weighted message counts between a component and other nodes.

    Every pair of consecutive scenario steps where one operation belongs to the
    component and the other to a component deployed on a different node adds the
    scenario's arrival rate (times the traffic share of replicated operations) to
    that node's score.

    Args:
        arch (Architecture): The architecture
        component_id (str): The component

    Returns:
        dict[str, float]: Node id to affinity score, nodes with no traffic omitted

    Raises:
        UnknownElementError: If the component does not exist

    """
    if component_id not in arch.component_map:
        raise UnknownElementError(f"Unknown component: {component_id}")
    home = arch.deployment.get(component_id)
    affinity: dict[str, float] = defaultdict(float)
    for scenario, caller, callee, share in arch.step_pairs():
        if caller.owner == callee.owner:
            continue
        if caller.owner == component_id:
            other = callee.owner
        elif callee.owner == component_id:
            other = caller.owner
        else:
            continue
        node_id = arch.deployment[other]
        weight = scenario.arrival_rate * share
        if node_id != home and weight > 0:
            affinity[node_id] += weight
    return dict(affinity)


def element_degrees(arch: Architecture, kind: ElementKind) -> dict[str, int]:
    """Degree of every element of a kind.

    The degree counts the distinct elements of the same kind adjacent to it in some
    scenario flow plus its deployment co-residents: other components on the same
    node for a component, other operations on the same node for an operation, and
    hosted components for a node.

    """
    adjacent: dict[str, set[str]] = defaultdict(set)

    def key(operation: Operation) -> str:
        if kind is ElementKind.OPERATION:
            return operation.origin
        if kind is ElementKind.COMPONENT:
            return operation.owner
        return arch.node_of(operation.owner)

    for _, caller, callee, _ in arch.step_pairs():
        first, second = key(caller), key(callee)
        if first != second:
            adjacent[first].add(second)
            adjacent[second].add(first)

    degrees: dict[str, int] = {}
    if kind is ElementKind.NODE:
        for node in arch.nodes:
            degrees[node.id] = len(adjacent[node.id]) + len(arch.components_on(node.id))
    elif kind is ElementKind.COMPONENT:
        for component in arch.components:
            mates = len(arch.components_on(arch.node_of(component.id))) - 1
            degrees[component.id] = len(adjacent[component.id]) + mates
    else:
        per_node: dict[str, int] = defaultdict(int)
        for operation in arch.operations:
            per_node[arch.processor_of(operation.id)] += 1
        for operation in arch.operations:
            mates = per_node[arch.processor_of(operation.id)] - 1
            degrees[operation.id] = len(adjacent[operation.origin]) + mates
    return degrees
