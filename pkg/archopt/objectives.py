"""Power, response time, cost and complexity of a refactored architecture."""

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from marshmallow import Schema, ValidationError, fields, validate

from archopt.model import Architecture, InstanceType
from archopt.refactor import (
    ActionContext,
    ActionKind,
    RefactoringSequence,
    apply_sequence,
)
from archopt.solver import PerformanceSolver, SolverResult, solve

DEFAULT_K = 0.3


class Objective(str, enum.Enum):
    """Minimized objectives, in canonical vector order."""

    POWER = "power"
    RESPONSE_TIME = "response_time"
    COST = "cost"
    COMPLEXITY = "complexity"


BASELINE_OBJECTIVES = frozenset(
    {Objective.RESPONSE_TIME, Objective.COST, Objective.COMPLEXITY}
)
POWER_AWARE_OBJECTIVES = frozenset(Objective)

_NAMED_SETS = {
    "baseline": BASELINE_OBJECTIVES,
    "power-aware": POWER_AWARE_OBJECTIVES,
}


def parse_objectives(names: str | Iterable[str]) -> frozenset[Objective]:
    """Objective set from ``baseline``, ``power-aware`` or a list of names.

    Raises:
        ValueError: On unknown names or an empty set

    """
    if isinstance(names, str):
        if names in _NAMED_SETS:
            return _NAMED_SETS[names]
        names = [part.strip() for part in names.split(",") if part.strip()]
    objectives = frozenset(Objective(name) for name in names)
    if not objectives:
        raise ValueError("At least one objective is required")
    return objectives


def ordered(objectives: Iterable[Objective]) -> tuple[Objective, ...]:
    """Objectives in canonical order."""
    chosen = set(objectives)
    return tuple(objective for objective in Objective if objective in chosen)


@dataclass(frozen=True)
class PowerParams:
    """Server power model parameters.

    Args:
        k (float): Fraction of the maximum power drawn by an idle server

    """

    k: float = DEFAULT_K

    def __post_init__(self):
        if not 0 <= self.k <= 1:
            raise ValueError(f"k must lie in [0, 1], got {self.k}")


@dataclass(frozen=True)
class ObjectiveVector:
    """Objective values of one solution.

    Args:
        power (float): Watts
        response_time (float): Milliseconds, infinite when saturated
        cost (float): USD per hour
        complexity (float): Refactoring effort
        active (frozenset[Objective]): Objectives taking part in dominance

    """

    power: float
    response_time: float
    cost: float
    complexity: float
    active: frozenset[Objective] = field(default=POWER_AWARE_OBJECTIVES, compare=False)

    def value(self, objective: Objective) -> float:
        """Value of one objective."""
        return getattr(self, objective.value)

    def values(
        self, objectives: Iterable[Objective] | None = None
    ) -> tuple[float, ...]:
        """Values of the given objectives, the active ones by default."""
        chosen = self.active if objectives is None else objectives
        return tuple(self.value(objective) for objective in ordered(chosen))

    @property
    def feasible(self) -> bool:
        """Whether the solution's response time is finite."""
        return math.isfinite(self.response_time)

    def as_dict(self) -> dict[str, float]:
        """All four values keyed by objective name."""
        return {objective.value: self.value(objective) for objective in Objective}


DEFAULT_COMPLEXITY: dict[ActionKind, float] = {
    ActionKind.MOVE: 2.0,
    ActionKind.REDO: 2.0,
    ActionKind.CLON: 1.0,
    ActionKind.MOTN: 4.0,
    ActionKind.DROP: 3.0,
}


@dataclass(frozen=True)
class ComplexityCatalog:
    """Base complexity of every action type."""

    base: Mapping[ActionKind, float] = field(
        default_factory=lambda: dict(DEFAULT_COMPLEXITY)
    )

    def __post_init__(self):
        base = {ActionKind(kind): float(value) for kind, value in self.base.items()}
        if missing := set(ActionKind) - set(base):
            raise ValueError(
                f"Missing base complexity for {sorted(k.value for k in missing)}"
            )
        if any(value < 0 for value in base.values()):
            raise ValueError("Base complexities must be non-negative")
        object.__setattr__(self, "base", base)

    def __getitem__(self, kind: ActionKind) -> float:
        return self.base[kind]


class ComplexityCatalogSchema(Schema):
    """Complexity catalog file: a map from action kind to base complexity."""

    base = fields.Dict(
        keys=fields.Enum(ActionKind, by_value=True),
        values=fields.Float(validate=validate.Range(min=0), allow_nan=False),
        required=True,
    )


def complexity_catalog_from(data: Mapping[str, Any]) -> ComplexityCatalog:
    """Catalog from a ``{kind: value}`` mapping, defaults filling missing kinds.

    Raises:
        ValueError: On unknown kinds or negative values

    """
    try:
        loaded = ComplexityCatalogSchema().load({"base": dict(data)})
    except ValidationError as err:
        raise ValueError(f"Invalid complexity catalog: {err.messages}") from err
    return ComplexityCatalog({**DEFAULT_COMPLEXITY, **loaded["base"]})


def read_complexity_catalog(path: str | Path) -> ComplexityCatalog:
    """Read a complexity catalog JSON file."""
    return complexity_catalog_from(json.loads(Path(path).read_text(encoding="utf-8")))


def node_power(
    utilization: float, instance: InstanceType, params: PowerParams
) -> float:
    """Power of one node: idle share scaled by ``k`` plus busy share at full power.

    A saturated node draws ``power_max``.

    """
    utilization = min(utilization, 1.0)
    return (1 - utilization) * params.k * instance.power_max + (
        utilization * instance.power_max
    )


def eval_power(arch: Architecture, result: SolverResult, params: PowerParams) -> float:
    """Total power in Watts of the nodes hosting at least one component."""
    return sum(
        node_power(result.node_utilization[node.id], arch.instance_of(node.id), params)
        for node in arch.used_nodes
    )


def eval_cost(arch: Architecture) -> float:
    """Hourly cost in USD of the nodes hosting at least one component."""
    return sum(arch.instance_of(node.id).cost for node in arch.used_nodes)


def eval_complexity(
    seq: RefactoringSequence,
    trace: Iterable[ActionContext],
    catalog: ComplexityCatalog,
) -> float:
    """Refactoring effort of a sequence.

    Each action costs its base complexity times ``1 + degree / max_degree`` of its
    target element, measured when the action was applied.

    """
    total = 0.0
    for action, context in zip(seq, trace):
        arch_factor = 1.0
        if context.max_degree > 0:
            arch_factor += context.degree / context.max_degree
        total += catalog[action.kind] * arch_factor
    return total


@dataclass(frozen=True)
class Evaluation:
    """A sequence's refactored architecture, its solution and objectives."""

    architecture: Architecture
    result: SolverResult
    objectives: ObjectiveVector


def evaluate_in_full(
    arch0: Architecture,
    seq: RefactoringSequence,
    params: PowerParams,
    catalog: ComplexityCatalog,
    objective_set: Iterable[Objective] = POWER_AWARE_OBJECTIVES,
    solver: PerformanceSolver | None = None,
) -> Evaluation:
    """Like :func:`evaluate`, also returning the architecture and solver result."""
    outcome = apply_sequence(seq, arch0)
    result = solve(outcome.architecture, solver)
    vector = ObjectiveVector(
        power=eval_power(outcome.architecture, result, params),
        response_time=result.system_response,
        cost=eval_cost(outcome.architecture),
        complexity=eval_complexity(seq, outcome.trace, catalog),
        active=frozenset(objective_set),
    )
    return Evaluation(outcome.architecture, result, vector)


def evaluate(
    arch0: Architecture,
    seq: RefactoringSequence,
    params: PowerParams,
    catalog: ComplexityCatalog,
    objective_set: Iterable[Objective] = POWER_AWARE_OBJECTIVES,
    solver: PerformanceSolver | None = None,
) -> ObjectiveVector:
    """Objective vector of the architecture a sequence produces.

    All four objectives are computed whatever the objective set; the set only marks
    which of them take part in dominance.

    Args:
        arch0 (Architecture): The initial architecture
        seq (RefactoringSequence): The refactoring sequence
        params (PowerParams): Power model parameters
        catalog (ComplexityCatalog): Base complexities
        objective_set (Iterable[Objective]): Objectives taking part in dominance
        solver (PerformanceSolver | None): Solver backend, open queues by default

    Returns:
        ObjectiveVector: The objectives

    Raises:
        InfeasibleSequenceError: If the sequence does not apply to ``arch0``

    """
    evaluation = evaluate_in_full(arch0, seq, params, catalog, objective_set, solver)
    return evaluation.objectives


class Evaluator:
    """Memoizing evaluation of sequences against one initial architecture.

    Not thread-safe; each run owns its evaluator.

    """

    def __init__(
        self,
        arch0: Architecture,
        params: PowerParams,
        catalog: ComplexityCatalog,
        objective_set: Iterable[Objective] = POWER_AWARE_OBJECTIVES,
        solver: PerformanceSolver | None = None,
    ):
        self.arch0 = arch0
        self.params = params
        self.catalog = catalog
        self.objective_set = frozenset(objective_set)
        self.solver = solver
        self._cache: dict[RefactoringSequence, ObjectiveVector] = {}

    def __call__(self, seq: RefactoringSequence) -> ObjectiveVector:
        if (vector := self._cache.get(seq)) is None:
            vector = evaluate(
                self.arch0,
                seq,
                self.params,
                self.catalog,
                self.objective_set,
                self.solver,
            )
            self._cache[seq] = vector
        return vector

    @property
    def evaluations(self) -> int:
        """Number of distinct sequences evaluated."""
        return len(self._cache)


class ObjectiveSetField(fields.Field):
    """Objective set serialized as a list of names.

    Loads ``"baseline"``, ``"power-aware"``, a comma separated string or a list of
    names.

    """

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return [objective.value for objective in ordered(value)]

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            return parse_objectives(value)
        except (TypeError, ValueError) as err:
            raise ValidationError(f"Invalid objective set: {value!r}") from err
