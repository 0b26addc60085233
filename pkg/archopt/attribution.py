"""Power and cost of individual request types.

The busy power of a node goes to its entries in proportion to their utilization,
and so do its idle power and its cost. A node with zero utilization serves no
entry; its idle power and cost are reported as unattributed.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import pandas as pd

from archopt.model import Architecture, UnknownElementError
from archopt.objectives import PowerParams, node_power
from archopt.refactor import RefactoringSequence, apply_sequence
from archopt.solver import (
    Entry,
    InfeasibleResultError,
    PerformanceSolver,
    SolverResult,
    solve,
)

logger = logging.getLogger(__name__)

ROW_COLUMNS = [
    "solution_id",
    "scenario_id",
    "power_w",
    "cost_usd_h",
    "share_power",
    "share_cost",
]
SUMMARY_COLUMNS = ["metric", "scenario", "initial", "mean", "std", "median"]


def _shares(entry: Entry, result: SolverResult) -> tuple[float, float]:
    node_utilization = result.node_utilization[entry.processor]
    if node_utilization <= 0:
        return 0.0, 0.0
    return result.entry_utilization[entry], node_utilization


def entry_power(entry: Entry, result: SolverResult, params: PowerParams) -> float:
    """Busy power of an entry plus its proportional share of the node's idle power.

    Returns 0 on a node with zero utilization.

    """
    entry_u, node_u = _shares(entry, result)
    if node_u == 0:
        return 0.0
    power_max = result.architecture.instance_of(entry.processor).power_max
    return entry_u * power_max + (1 - node_u) * params.k * power_max * entry_u / node_u


def entry_cost(entry: Entry, result: SolverResult) -> float:
    """Node cost in proportion to the entry's share of the node's utilization."""
    entry_u, node_u = _shares(entry, result)
    if node_u == 0:
        return 0.0
    return result.architecture.instance_of(entry.processor).cost * entry_u / node_u


def _entries_of(scenario_id: str, result: SolverResult) -> tuple[Entry, ...]:
    if scenario_id not in result.scenario_response:
        raise UnknownElementError(f"Unknown scenario: {scenario_id}")
    return result.entries_of(scenario_id)


def request_power(scenario_id: str, result: SolverResult, params: PowerParams) -> float:
    """Power drawn by one request type.

    Raises:
        UnknownElementError: If the scenario is not part of the result

    """
    return sum(
        entry_power(entry, result, params) for entry in _entries_of(scenario_id, result)
    )


def request_cost(scenario_id: str, result: SolverResult) -> float:
    """Hourly cost of one request type.

    Raises:
        UnknownElementError: If the scenario is not part of the result

    """
    return sum(entry_cost(entry, result) for entry in _entries_of(scenario_id, result))


@dataclass(frozen=True)
class IdleNode:
    """A used node no entry keeps busy."""

    node: str
    power_w: float
    cost_usd_h: float


@dataclass(frozen=True)
class AttributionReport:
    """Power and cost of every request type.

    Args:
        per_scenario_power (Mapping[str, float]): Watts by scenario
        per_scenario_cost (Mapping[str, float]): USD per hour by scenario
        total_power (float): Power of the nodes with non-zero utilization
        total_cost (float): Cost of the nodes with non-zero utilization
        unattributed (tuple[IdleNode, ...]): Used nodes with zero utilization

    """

    per_scenario_power: Mapping[str, float]
    per_scenario_cost: Mapping[str, float]
    total_power: float
    total_cost: float
    unattributed: tuple[IdleNode, ...] = field(default=())

    @property
    def totals(self) -> tuple[float, float]:
        """Attributed Watts and USD per hour."""
        return self.total_power, self.total_cost

    def share_power(self, scenario_id: str) -> float:
        """Fraction of the attributed power drawn by a scenario."""
        if self.total_power == 0:
            return 0.0
        return self.per_scenario_power[scenario_id] / self.total_power

    def share_cost(self, scenario_id: str) -> float:
        """Fraction of the attributed cost due to a scenario."""
        if self.total_cost == 0:
            return 0.0
        return self.per_scenario_cost[scenario_id] / self.total_cost

    def rows(self, solution_id: str) -> list[dict[str, Any]]:
        """One record per scenario in the stacked-bar layout."""
        return [
            {
                "solution_id": solution_id,
                "scenario_id": scenario_id,
                "power_w": power,
                "cost_usd_h": self.per_scenario_cost[scenario_id],
                "share_power": self.share_power(scenario_id),
                "share_cost": self.share_cost(scenario_id),
            }
            for scenario_id, power in self.per_scenario_power.items()
        ]


def attribute(
    arch: Architecture, result: SolverResult, params: PowerParams
) -> AttributionReport:
    """Attribute power and cost of a solved architecture to its scenarios.

    Args:
        arch (Architecture): The solved architecture
        result (SolverResult): Its solution
        params (PowerParams): Power model parameters

    Returns:
        AttributionReport: Per-scenario power and cost

    Raises:
        InfeasibleResultError: If a node saturates

    """
    if not result.feasible:
        raise InfeasibleResultError("Cannot attribute a saturated architecture")
    busy = {p for p, u in result.node_utilization.items() if u > 0}
    scenarios = [scenario.id for scenario in arch.scenarios]
    per_power = {s: request_power(s, result, params) for s in scenarios}
    per_cost = {s: request_cost(s, result) for s in scenarios}
    total_power = total_cost = 0.0
    idle = []
    for node in arch.used_nodes:
        instance = arch.instance_of(node.id)
        power = node_power(result.node_utilization[node.id], instance, params)
        if node.id in busy:
            total_power += power
            total_cost += instance.cost
        else:
            idle.append(IdleNode(node.id, power, instance.cost))
    return AttributionReport(per_power, per_cost, total_power, total_cost, tuple(idle))


def attribute_sequences(
    arch0: Architecture,
    solutions: Iterable[tuple[str, RefactoringSequence]],
    params: PowerParams,
    solver: PerformanceSolver | None = None,
) -> dict[str, AttributionReport]:
    """Attribute the architecture every solution's sequence produces.

    Saturated solutions are skipped with a warning.

    """
    reports = {}
    for solution_id, genotype in solutions:
        arch = apply_sequence(genotype, arch0).architecture
        result = solve(arch, solver)
        if not result.feasible:
            logger.warning("Skipping saturated solution %s", solution_id)
            continue
        reports[solution_id] = attribute(arch, result, params)
    return reports


def attribution_frame(reports: Mapping[str, AttributionReport]) -> pd.DataFrame:
    """Per-solution per-scenario power and cost rows."""
    return pd.DataFrame(
        [row for sid, report in reports.items() for row in report.rows(sid)],
        columns=ROW_COLUMNS,
    )


def summarize(
    reports: Sequence[AttributionReport], initial: AttributionReport | None = None
) -> pd.DataFrame:
    """Mean, standard deviation and median of per-scenario power and cost.

    Args:
        reports (Sequence[AttributionReport]): Reports of the front members
        initial (AttributionReport | None): Report of the initial architecture

    Returns:
        pd.DataFrame: Columns metric, scenario, initial, mean, std, median with
        metric ``power_w`` or ``cost_usd_h``

    """
    frame = pd.DataFrame(
        [
            {"metric": metric, "scenario": scenario, "value": value}
            for report in reports
            for metric, values in (
                ("power_w", report.per_scenario_power),
                ("cost_usd_h", report.per_scenario_cost),
            )
            for scenario, value in values.items()
        ],
        columns=["metric", "scenario", "value"],
    )
    summary = (
        frame.groupby(["metric", "scenario"], sort=False)["value"]
        .agg(["mean", "std", "median"])
        .reset_index()
    )
    summary.insert(
        2,
        "initial",
        [
            _initial_value(initial, metric, scenario)
            for metric, scenario in zip(summary["metric"], summary["scenario"])
        ],
    )
    return summary[SUMMARY_COLUMNS]


def _initial_value(
    initial: AttributionReport | None, metric: str, scenario: str
) -> float | None:
    if initial is None:
        return None
    values = (
        initial.per_scenario_power if metric == "power_w" else initial.per_scenario_cost
    )
    return values.get(scenario)


def idle_frame(reports: Mapping[str, AttributionReport]) -> pd.DataFrame:
    """Unattributed idle nodes of every solution."""
    return pd.DataFrame(
        [
            {
                "solution_id": sid,
                "node": idle.node,
                "power_w": idle.power_w,
                "cost_usd_h": idle.cost_usd_h,
            }
            for sid, report in reports.items()
            for idle in report.unattributed
        ],
        columns=["solution_id", "node", "power_w", "cost_usd_h"],
    )
