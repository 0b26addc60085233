"""Queueing model of an architecture and its analytical solution.

Each node is a processor, each scenario step bound to the node hosting its
operation's owner is an entry. The default solver treats every processor as an
open M/M/1 queue shared by all scenario classes and adds the link latency of every
hop between consecutive steps running on different nodes. The layered semantics of
a full LQN solver (second phases, nested synchronous calls, multiplicity) are not
modeled; a different backend can be plugged in through :class:`PerformanceSolver`.
"""

import abc
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.sparse import csgraph

from archopt.model import Architecture

INFEASIBLE = math.inf
SATURATION_EPSILON = 1e-6


@dataclass(frozen=True)
class Entry:
    """One scenario step bound to the processor serving it.

    Args:
        scenario (str): Scenario id
        step_index (int): Position of the step in the scenario
        operation (str): Id of the operation (or replica) serving the step
        processor (str): Id of the node hosting the operation's owner
        share (float): Share of the scenario's traffic this entry serves

    """

    scenario: str
    step_index: int
    operation: str
    processor: str
    share: float = 1.0


@dataclass(frozen=True)
class SolverResult:  # pylint: disable=too-many-instance-attributes
    """Performance indices of a solved architecture.

    Response times are in milliseconds and are :data:`INFEASIBLE` when any node
    saturates.

    """

    node_utilization: Mapping[str, float]
    entry_utilization: Mapping[Entry, float]
    entry_residence: Mapping[Entry, float]
    scenario_response: Mapping[str, float]
    system_response: float
    feasible: bool
    architecture: Architecture = field(compare=False, repr=False)

    @property
    def entries(self) -> tuple[Entry, ...]:
        """All entries of the model."""
        return tuple(self.entry_utilization)

    def entries_on(self, node_id: str) -> tuple[Entry, ...]:
        """Entries served by a node."""
        return tuple(e for e in self.entry_utilization if e.processor == node_id)

    def entries_of(self, scenario_id: str) -> tuple[Entry, ...]:
        """Entries a scenario flows through."""
        return tuple(e for e in self.entry_utilization if e.scenario == scenario_id)


def build_queueing_model(arch: Architecture) -> tuple[Entry, ...]:
    """Map every scenario step to the processor executing it.

    A step whose operation was replicated by node cloning becomes one entry per
    replica, each carrying its share of the traffic.

    Args:
        arch (Architecture): A valid architecture

    Returns:
        tuple[Entry, ...]: Entries in scenario and step order

    """
    return tuple(
        Entry(
            scenario.id,
            index,
            operation.id,
            arch.processor_of(operation.id),
            operation.weight,
        )
        for scenario in arch.scenarios
        for index, step in enumerate(scenario.steps)
        for operation in arch.replicas(step)
    )


def hop_latencies(arch: Architecture) -> dict[tuple[str, str], float]:
    """Shortest-path link latency between every pair of distinct nodes.

    Pairs with no path over the links are left out and count as no delay.

    """
    ids = [node.id for node in arch.nodes]
    index = {id_: position for position, id_ in enumerate(ids)}
    matrix = np.full((len(ids), len(ids)), np.inf)
    for link in arch.links:
        i, j = index[link.a], index[link.b]
        matrix[i, j] = matrix[j, i] = min(matrix[i, j], link.latency)
    graph = csgraph.csgraph_from_dense(matrix, null_value=np.inf)
    distances = csgraph.shortest_path(graph, directed=False)
    return {
        (a, b): float(distances[index[a], index[b]])
        for a, b in itertools.permutations(ids, 2)
        if np.isfinite(distances[index[a], index[b]])
    }


class PerformanceSolver(abc.ABC):
    """Solver interface turning an architecture into performance indices."""

    @abc.abstractmethod
    def solve(self, arch: Architecture) -> SolverResult:
        """Solve the queueing model of an architecture.

        Args:
            arch (Architecture): A valid architecture

        Returns:
            SolverResult: Utilizations and response times

        """


class OpenQueueingSolver(PerformanceSolver):
    """Open multiclass M/M/1-per-node solver with additive link latency.

    Args:
        epsilon (float): Saturation margin; a node is saturated once its
            utilization reaches ``1 - epsilon``

    """

    def __init__(self, epsilon: float = SATURATION_EPSILON):
        self.epsilon = epsilon

    def solve(self, arch: Architecture) -> SolverResult:
        entries = build_queueing_model(arch)
        rates = {scenario.id: scenario.arrival_rate for scenario in arch.scenarios}
        service: dict[Entry, float] = {}
        entry_utilization: dict[Entry, float] = {}
        node_utilization = {node.id: 0.0 for node in arch.nodes}
        for entry in entries:
            speed = arch.instance_of(entry.processor).speed_factor
            service[entry] = arch.operation_map[entry.operation].demand / speed
            utilization = rates[entry.scenario] * entry.share * service[entry] / 1000.0
            entry_utilization[entry] = utilization
            node_utilization[entry.processor] += utilization

        feasible = all(u < 1 - self.epsilon for u in node_utilization.values())
        if not feasible:
            return SolverResult(
                node_utilization=node_utilization,
                entry_utilization=entry_utilization,
                entry_residence={entry: INFEASIBLE for entry in entries},
                scenario_response={scenario_id: INFEASIBLE for scenario_id in rates},
                system_response=INFEASIBLE,
                feasible=False,
                architecture=arch,
            )

        residence = {
            entry: service[entry] / (1 - node_utilization[entry.processor])
            for entry in entries
        }
        response: dict[str, float] = {scenario_id: 0.0 for scenario_id in rates}
        for entry, time in residence.items():
            response[entry.scenario] += entry.share * time
        latencies: dict[tuple[str, str], float] | None = None
        for scenario, caller, callee, share in arch.step_pairs():
            source = arch.processor_of(caller.id)
            target = arch.processor_of(callee.id)
            if source == target:
                continue
            if latencies is None:
                latencies = hop_latencies(arch)
            response[scenario.id] += share * latencies.get((source, target), 0.0)

        total_rate = sum(rates.values())
        if total_rate > 0:
            system = sum(rates[s] * r for s, r in response.items()) / total_rate
        else:
            system = sum(response.values()) / len(response) if response else 0.0
        return SolverResult(
            node_utilization=node_utilization,
            entry_utilization=entry_utilization,
            entry_residence=residence,
            scenario_response=response,
            system_response=system,
            feasible=True,
            architecture=arch,
        )


_DEFAULT_SOLVER = OpenQueueingSolver()


def solve(arch: Architecture, solver: PerformanceSolver | None = None) -> SolverResult:
    """Solve an architecture with the given solver, the open-queue one by default."""
    return (solver or _DEFAULT_SOLVER).solve(arch)
