"""Front files: one JSON object per line and per individual."""

import json
import logging
import math
import re
from pathlib import Path
from typing import Any, Iterable

from marshmallow import Schema, ValidationError, fields, post_load

from archopt.objectives import Objective, ObjectiveSetField, ObjectiveVector
from archopt.refactor import (
    MAX_SEQUENCE_LENGTH,
    RefactoringActionSchema,
    RefactoringSequence,
)

from .exc import FrontFileError
from .nsga2 import Individual

logger = logging.getLogger(__name__)

INFEASIBLE_MARK = "infeasible"
FRONT_FILE_PATTERN = re.compile(r"front-run-(\d+)\.jsonl$")


def run_front_name(run: int) -> str:
    """File name of one run's front."""
    return f"front-run-{run:02d}.jsonl"


def solution_id(run: int, index: int) -> str:
    """Id of the ``index``-th member of a run's front."""
    return f"r{run:02d}-{index:02d}"


class InfeasibleFloat(fields.Float):
    """Float written as ``"infeasible"`` when infinite."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is not None and math.isinf(value):
            return INFEASIBLE_MARK
        return super()._serialize(value, attr, obj, **kwargs)

    def _deserialize(self, value, attr, data, **kwargs):
        if value == INFEASIBLE_MARK:
            return math.inf
        return super()._deserialize(value, attr, data, **kwargs)


class PhenotypeSchema(Schema):
    """All four objective values."""

    power = fields.Float(required=True)
    response_time = InfeasibleFloat(required=True)
    cost = fields.Float(required=True)
    complexity = fields.Float(required=True)


class FrontRowSchema(Schema):
    """One front member."""

    solution_id = fields.Str(required=True)
    run = fields.Int(allow_none=True, load_default=None)
    generations = fields.Int(required=True)
    objectives = ObjectiveSetField(required=True)
    genotype = fields.List(fields.Nested(RefactoringActionSchema), required=True)
    phenotype = fields.Nested(PhenotypeSchema, required=True)

    @post_load
    def make(self, data: dict[str, Any], **kwargs) -> Individual:
        """Build the individual."""
        # pylint: disable=unused-argument
        genotype = RefactoringSequence(
            tuple(data["genotype"]), max(MAX_SEQUENCE_LENGTH, len(data["genotype"]))
        )
        phenotype = ObjectiveVector(**data["phenotype"], active=data["objectives"])
        return Individual(
            genotype, phenotype, solution_id=data["solution_id"], run=data["run"]
        )


def front_row(individual: Individual, generations: int) -> dict[str, Any]:
    """JSON-compatible row of a front member."""
    return FrontRowSchema().dump(
        {
            "solution_id": individual.solution_id,
            "run": individual.run,
            "generations": generations,
            "objectives": individual.phenotype.active,
            "genotype": individual.genotype.actions,
            "phenotype": individual.phenotype,
        }
    )


def write_front(
    individuals: Iterable[Individual], generations: int, path: str | Path
) -> None:
    """Write a front file; identical fronts give identical bytes."""
    lines = [
        json.dumps(front_row(individual, generations), sort_keys=True)
        for individual in individuals
    ]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    logger.info("Wrote %d solutions to %s", len(lines), path)


def read_front(path: str | Path) -> list[Individual]:
    """Read a front file.

    Raises:
        FrontFileError: On malformed lines
        OSError: If the file cannot be read

    """
    individuals = []
    schema = FrontRowSchema()
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            individuals.append(schema.load(json.loads(line)))
        except (json.JSONDecodeError, ValidationError) as err:
            raise FrontFileError(f"{path}, line {number}: {err}") from err
    return individuals


def read_front_dir(directory: str | Path) -> list[list[Individual]]:
    """Read every per-run front file of an experiment directory, by run.

    Raises:
        FrontFileError: If the directory holds no per-run front file

    """
    paths = sorted(
        (int(match.group(1)), path)
        for path in Path(directory).iterdir()
        if (match := FRONT_FILE_PATTERN.search(path.name))
    )
    if not paths:
        raise FrontFileError(f"No per-run front files in {directory}")
    return [read_front(path) for _, path in paths]


def objective_samples(
    fronts: Iterable[Iterable[Individual]],
) -> dict[Objective, list[float]]:
    """Values of every objective pooled over the given fronts."""
    samples: dict[Objective, list[float]] = {objective: [] for objective in Objective}
    for front in fronts:
        for individual in front:
            for objective in Objective:
                samples[objective].append(individual.phenotype.value(objective))
    return samples
