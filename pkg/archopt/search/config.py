"""Experiment configuration."""

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from marshmallow import Schema, ValidationError, fields, post_load, validate

from archopt.objectives import (
    DEFAULT_K,
    POWER_AWARE_OBJECTIVES,
    ComplexityCatalog,
    Objective,
    ObjectiveSetField,
    PowerParams,
    complexity_catalog_from,
)
from archopt.refactor import MAX_SEQUENCE_LENGTH

from .exc import ConfigError


@dataclass(frozen=True)
class ExperimentConfig:  # pylint: disable=too-many-instance-attributes
    """Settings of an optimization experiment.

    Args:
        objective_set (frozenset[Objective]): Objectives taking part in dominance
        population_size (int): Individuals per generation, even and at least 4
        max_generations (int): Generations per run
        crossover_prob (float): Probability of crossing a parent pair
        mutation_prob (float): Probability of mutating an offspring
        runs (int): Independent runs
        seed (int): Master seed; run ``i`` is seeded with ``seed + i``
        max_sequence_length (int): Maximum refactoring actions per individual
        k (float): Idle power scaling factor
        complexity (ComplexityCatalog): Base complexity per action type
        threads (int | None): Parallel runs, ``None`` to read ``ARCHOPT_THREADS``

    Raises:
        ConfigError: On out-of-range settings

    """

    objective_set: frozenset[Objective] = POWER_AWARE_OBJECTIVES
    population_size: int = 16
    max_generations: int = 200
    crossover_prob: float = 0.8
    mutation_prob: float = 0.2
    runs: int = 31
    seed: int = 0
    max_sequence_length: int = MAX_SEQUENCE_LENGTH
    k: float = DEFAULT_K
    complexity: ComplexityCatalog = field(default_factory=ComplexityCatalog)
    threads: int | None = None

    def __post_init__(self):
        problems = []
        if not self.objective_set:
            problems.append("objective set is empty")
        if self.population_size < 4 or self.population_size % 2:
            problems.append("population size must be even and at least 4")
        if self.max_generations < 0:
            problems.append("generations must be non-negative")
        for name in ("crossover_prob", "mutation_prob", "k"):
            if not 0 <= getattr(self, name) <= 1:
                problems.append(f"{name} must lie in [0, 1]")
        if self.runs < 1:
            problems.append("at least one run is required")
        if self.max_sequence_length < 1:
            problems.append("sequences need room for at least one action")
        if self.threads is not None and self.threads < 1:
            problems.append("threads must be positive")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def params(self) -> PowerParams:
        """Power model parameters."""
        return PowerParams(self.k)

    def run_seed(self, run: int) -> int:
        """Seed of one run."""
        return self.seed + run

    def override(self, **changes: Any) -> "ExperimentConfig":
        """Copy with the given non-``None`` settings replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


class ExperimentConfigSchema(Schema):
    """Experiment configuration file schema; every key is optional."""

    objectives = ObjectiveSetField(attribute="objective_set")
    population_size = fields.Int(validate=validate.Range(min=4))
    max_generations = fields.Int(validate=validate.Range(min=0))
    crossover_prob = fields.Float(validate=validate.Range(min=0, max=1))
    mutation_prob = fields.Float(validate=validate.Range(min=0, max=1))
    runs = fields.Int(validate=validate.Range(min=1))
    seed = fields.Int()
    max_sequence_length = fields.Int(validate=validate.Range(min=1))
    k = fields.Float(validate=validate.Range(min=0, max=1))
    complexity = fields.Method("dump_complexity", deserialize="load_complexity")
    threads = fields.Int(allow_none=True, validate=validate.Range(min=1))

    def dump_complexity(self, config: ExperimentConfig) -> dict[str, float]:
        """Complexity catalog as a kind to value map."""
        return {kind.value: value for kind, value in config.complexity.base.items()}

    def load_complexity(self, value: Any) -> ComplexityCatalog:
        """Complexity catalog from a kind to value map."""
        if not isinstance(value, dict):
            raise ValidationError("Expected a map from action kind to complexity")
        try:
            return complexity_catalog_from(value)
        except ValueError as err:
            raise ValidationError(str(err)) from err

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> ExperimentConfig:
        """Build the configuration."""
        # pylint: disable=unused-argument
        try:
            return ExperimentConfig(**data)
        except ConfigError as err:
            raise ValidationError(str(err)) from err


def config_from(data: dict[str, Any]) -> ExperimentConfig:
    """Configuration from a JSON-compatible mapping.

    Raises:
        ConfigError: On unknown keys or invalid values

    """
    try:
        return ExperimentConfigSchema().load(data)
    except ValidationError as err:
        raise ConfigError(f"Invalid configuration: {err.messages}") from err


def read_config(path: str | Path) -> ExperimentConfig:
    """Read a configuration file.

    Raises:
        ConfigError: If the file is not JSON or holds invalid settings

    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: {err}") from err
    return config_from(data)


def dump_config(config: ExperimentConfig) -> dict[str, Any]:
    """JSON-compatible snapshot of a configuration."""
    return ExperimentConfigSchema().dump(config)
