"""Precondition checks and pure application of refactoring actions."""

import logging
import random
import statistics
from dataclasses import dataclass, replace
from typing import Callable

from archopt.model import (
    Architecture,
    Component,
    Link,
    Node,
    Operation,
    Violation,
    component_affinity,
    element_degrees,
)

from .actions import ActionKind, RefactoringAction, RefactoringSequence
from .exc import (
    ActionSamplingError,
    InfeasibleSequenceError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

MAX_REPAIR_ATTEMPTS = 10
MAX_SAMPLING_ATTEMPTS = 100


@dataclass(frozen=True)
class ActionContext:
    """Architectural context of an action at the time it was applied.

    Args:
        kind (ActionKind): Action type
        target (str): Target element id
        degree (int): Degree of the target element
        max_degree (int): Largest degree among elements of the target's kind

    """

    kind: ActionKind
    target: str
    degree: int
    max_degree: int


@dataclass(frozen=True)
class SequenceOutcome:
    """Result of applying a whole sequence."""

    architecture: Architecture
    trace: tuple[ActionContext, ...]


def precheck(action: RefactoringAction, arch: Architecture) -> Violation | None:
    """Check the preconditions of an action.

    Args:
        action (RefactoringAction): The action
        arch (Architecture): The architecture it would be applied to

    Returns:
        Violation | None: The violated precondition, ``None`` if the action applies

    """
    # pylint: disable=too-many-return-statements
    target = action.target
    if action.kind in (ActionKind.REDO, ActionKind.MOTN):
        if action.new_instance not in arch.instance_map:
            return Violation(str(action.new_instance), "unknown instance type")
    if action.kind is ActionKind.REDO:
        if target not in arch.component_map:
            return Violation(target, "unknown component")
    elif action.kind in (ActionKind.MOVE, ActionKind.MOTN):
        operation = arch.operation_map.get(target)
        if operation is None:
            return Violation(target, "unknown operation")
        if action.kind is ActionKind.MOVE:
            if action.destination not in arch.component_map:
                return Violation(str(action.destination), "unknown component")
            if operation.owner == action.destination:
                return Violation(target, "no-op move", operation.owner)
    else:
        if target not in arch.node_map:
            return Violation(target, "unknown node")
        if action.kind is ActionKind.CLON and not arch.components_on(target):
            return Violation(target, "empty node")
        if action.kind is ActionKind.DROP:
            if len(arch.nodes) == 1:
                return Violation(target, "last node")
            if not arch.neighbors(target):
                return Violation(target, "no neighbor to relocate to")
    return None


def _fresh_id(stem: str, taken: set[str]) -> str:
    candidate, suffix = stem, 1
    while candidate in taken:
        suffix += 1
        candidate = f"{stem}-{suffix}"
    taken.add(candidate)
    return candidate


def _typical_latency(arch: Architecture) -> float:
    if not arch.links:
        return 0.0
    return statistics.fmean(link.latency for link in arch.links)


def _latency_like(arch: Architecture, reference: str, peer: str) -> float:
    link = arch.link_between(reference, peer)
    return link.latency if link else _typical_latency(arch)


def _redo(action: RefactoringAction, arch: Architecture) -> Architecture:
    origin = arch.node_of(action.target)
    node_id = _fresh_id(f"{action.target}-node", set(arch.node_map))
    links = [
        Link(node_id, peer, _latency_like(arch, origin, peer))
        for peer in arch.neighbors(origin)
    ]
    links.append(Link(node_id, origin, _typical_latency(arch)))
    return replace(
        arch,
        nodes=arch.nodes + (Node(node_id, str(action.new_instance)),),
        links=arch.links + tuple(links),
        deployment={**arch.deployment, action.target: node_id},
    )


def _move(action: RefactoringAction, arch: Architecture) -> Architecture:
    return replace(
        arch,
        operations=tuple(
            replace(op, owner=str(action.destination)) if op.id == action.target else op
            for op in arch.operations
        ),
    )


def _clon(action: RefactoringAction, arch: Architecture) -> Architecture:
    original = arch.node_map[action.target]
    clone_id = _fresh_id(f"{original.id}-clone", set(arch.node_map))
    taken_components = set(arch.component_map)
    copies = {
        component: _fresh_id(f"{component}-clone", taken_components)
        for component in arch.components_on(original.id)
    }
    taken_operations = set(arch.operation_map)
    operations: list[Operation] = []
    replicas: list[Operation] = []
    for operation in arch.operations:
        if operation.owner not in copies:
            operations.append(operation)
            continue
        half = operation.weight / 2
        operations.append(replace(operation, weight=half))
        replicas.append(
            Operation(
                _fresh_id(f"{operation.id}-clone", taken_operations),
                owner=copies[operation.owner],
                demand=operation.demand,
                replica_of=operation.origin,
                weight=half,
            )
        )
    return replace(
        arch,
        nodes=arch.nodes + (Node(clone_id, original.instance),),
        components=arch.components + tuple(Component(c) for c in copies.values()),
        operations=tuple(operations + replicas),
        links=arch.links
        + tuple(
            Link(clone_id, link.other(original.id), link.latency)
            for link in arch.links_of(original.id)
        ),
        deployment={**arch.deployment, **{c: clone_id for c in copies.values()}},
    )


def _motn(action: RefactoringAction, arch: Architecture) -> Architecture:
    operation = arch.operation_map[action.target]
    origin = arch.processor_of(operation.id)
    component_id = _fresh_id(f"{operation.id}-component", set(arch.component_map))
    node_id = _fresh_id(f"{operation.id}-node", set(arch.node_map))
    callers = sorted(
        {
            arch.processor_of(caller.id)
            for _, caller, callee, _ in arch.step_pairs()
            if callee.id == operation.id
        }
    ) or [origin]
    return replace(
        arch,
        nodes=arch.nodes + (Node(node_id, str(action.new_instance)),),
        components=arch.components + (Component(component_id),),
        operations=tuple(
            replace(op, owner=component_id) if op.id == operation.id else op
            for op in arch.operations
        ),
        links=arch.links
        + tuple(
            Link(node_id, caller, _latency_like(arch, origin, caller))
            for caller in callers
        ),
        deployment={**arch.deployment, component_id: node_id},
    )


def _drop(action: RefactoringAction, arch: Architecture) -> Architecture:
    neighbors = arch.neighbors(action.target)
    deployment = dict(arch.deployment)
    for component in arch.components_on(action.target):
        scores = component_affinity(arch, component)
        deployment[component] = min(
            neighbors, key=lambda node_id: (-scores.get(node_id, 0.0), node_id)
        )
    return replace(
        arch,
        nodes=tuple(node for node in arch.nodes if node.id != action.target),
        links=tuple(link for link in arch.links if not link.touches(action.target)),
        deployment=deployment,
    )


Applier = Callable[[RefactoringAction, Architecture], Architecture]

_APPLIERS: dict[ActionKind, Applier] = {
    ActionKind.REDO: _redo,
    ActionKind.MOVE: _move,
    ActionKind.CLON: _clon,
    ActionKind.MOTN: _motn,
    ActionKind.DROP: _drop,
}


def apply(action: RefactoringAction, arch: Architecture) -> Architecture:
    """Apply an action, leaving the input architecture untouched.

    REDO moves a component to a new node linked to the original node and its
    neighbors. MOVE hands an operation to another component. CLON replicates a node
    with its components, operations and links; each replicated operation serves half
    of the traffic it served before. MOTN moves an operation to a new component on a
    new node linked to the nodes calling it. DROP removes a node and relocates each
    of its components to the linked neighbor with the highest affinity, ties going
    to the smallest node id.

    Args:
        action (RefactoringAction): The action
        arch (Architecture): The architecture

    Returns:
        Architecture: The refactored architecture

    Raises:
        PreconditionError: If the action's preconditions do not hold

    """
    if violation := precheck(action, arch):
        raise PreconditionError(violation)
    return _APPLIERS[action.kind](action, arch)


def context_of(action: RefactoringAction, arch: Architecture) -> ActionContext:
    """Degree of the action's target and the largest degree of its element kind."""
    degrees = element_degrees(arch, action.kind.target_kind)
    return ActionContext(
        action.kind,
        action.target,
        degrees.get(action.target, 0),
        max(degrees.values(), default=0),
    )


def apply_sequence(seq: RefactoringSequence, arch0: Architecture) -> SequenceOutcome:
    """Apply a sequence left to right, prechecking every intermediate step.

    Args:
        seq (RefactoringSequence): The sequence
        arch0 (Architecture): The initial architecture

    Returns:
        SequenceOutcome: The final architecture and the context of every action

    Raises:
        InfeasibleSequenceError: Carrying the index of the first failing action

    """
    arch = arch0
    trace: list[ActionContext] = []
    for index, action in enumerate(seq):
        if violation := precheck(action, arch):
            raise InfeasibleSequenceError(index, violation)
        trace.append(context_of(action, arch))
        arch = _APPLIERS[action.kind](action, arch)
    return SequenceOutcome(arch, tuple(trace))


def random_action(
    arch: Architecture, rng: random.Random, attempts: int = MAX_SAMPLING_ATTEMPTS
) -> RefactoringAction:
    """Sample an applicable action.

    A kind is drawn uniformly, then target, destination and instance type are drawn
    uniformly among the matching elements; draws failing their preconditions are
    retried.

    Args:
        arch (Architecture): The architecture the action must apply to
        rng (random.Random): Caller-owned generator
        attempts (int): Retry budget

    Returns:
        RefactoringAction: An action passing :func:`precheck`

    Raises:
        ActionSamplingError: If no applicable action was drawn within the budget

    """
    nodes = sorted(arch.node_map)
    components = sorted(arch.component_map)
    operations = sorted(arch.operation_map)
    instances = sorted(arch.instance_map)
    kinds = list(ActionKind)
    for _ in range(attempts):
        kind = rng.choice(kinds)
        if kind is ActionKind.REDO and components:
            action = RefactoringAction(
                kind, rng.choice(components), new_instance=rng.choice(instances)
            )
        elif kind is ActionKind.MOVE and operations:
            action = RefactoringAction(
                kind, rng.choice(operations), destination=rng.choice(components)
            )
        elif kind is ActionKind.MOTN and operations:
            action = RefactoringAction(
                kind, rng.choice(operations), new_instance=rng.choice(instances)
            )
        elif kind in (ActionKind.CLON, ActionKind.DROP):
            action = RefactoringAction(kind, rng.choice(nodes))
        else:
            continue
        if precheck(action, arch) is None:
            return action
    raise ActionSamplingError(f"No applicable action found in {attempts} draws")


def random_sequence(
    arch0: Architecture, rng: random.Random, max_length: int
) -> RefactoringSequence:
    """Sample a feasible sequence of 1 to ``max_length`` actions.

    The sequence stops early if an intermediate architecture admits no action.

    Raises:
        ActionSamplingError: If not even the first action can be drawn

    """
    length = rng.randint(1, max_length)
    actions: list[RefactoringAction] = []
    arch = arch0
    for _ in range(length):
        try:
            action = random_action(arch, rng)
        except ActionSamplingError:
            if not actions:
                raise
            break
        actions.append(action)
        arch = _APPLIERS[action.kind](action, arch)
    return RefactoringSequence(tuple(actions), max_length)


def repair(
    seq: RefactoringSequence,
    arch0: Architecture,
    rng: random.Random,
    attempts: int = MAX_REPAIR_ATTEMPTS,
) -> RefactoringSequence:
    """Make a sequence feasible.

    Every failing gene is resampled against the intermediate architecture; when no
    replacement is found within ``attempts`` tries, the sequence is truncated at the
    failing gene.

    Args:
        seq (RefactoringSequence): Possibly infeasible sequence
        arch0 (Architecture): The initial architecture
        rng (random.Random): Caller-owned generator
        attempts (int): Resampling attempts per failing gene

    Returns:
        RefactoringSequence: A feasible sequence

    """
    actions = list(seq.actions)
    arch = arch0
    index = 0
    while index < len(actions):
        if precheck(actions[index], arch) is not None:
            replacement = None
            for _ in range(attempts):
                try:
                    replacement = random_action(arch, rng)
                    break
                except ActionSamplingError:
                    continue
            if replacement is None:
                logger.debug("Truncating %s at action %d", seq, index)
                del actions[index:]
                break
            logger.debug("Resampled action %d of %s as %s", index, seq, replacement)
            actions[index] = replacement
        arch = _APPLIERS[actions[index].kind](actions[index], arch)
        index += 1
    return RefactoringSequence(tuple(actions), seq.max_length)
