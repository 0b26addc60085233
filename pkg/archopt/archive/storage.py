"""SQL archive of experiments and their front members."""

import contextlib
import json
import logging
import math
from typing import Any, Iterable, Iterator, Optional

import sqlalchemy as sql
from marshmallow_sqlalchemy import SQLAlchemyAutoSchema
from sqlalchemy import orm

from archopt.objectives import Objective, ObjectiveVector, ordered, parse_objectives
from archopt.refactor import dump_sequence, load_sequence
from archopt.search import ExperimentResult, Individual, RunManifest

from .exc import ConflictError, NotFoundError
from .filter import SolutionFilterMap, SolutionOrderByMap
from .models import Base, ExperimentRecord, SolutionRecord
from .visitor import StatementVisitor

logger = logging.getLogger(__name__)

# pylint: disable=too-many-ancestors


class ExperimentRecordSchema(SQLAlchemyAutoSchema):
    """Experiment row schema."""

    class Meta:
        """Options."""

        model = ExperimentRecord
        load_instance = True


class SolutionRecordSchema(SQLAlchemyAutoSchema):
    """Solution row schema."""

    class Meta:
        """Options."""

        model = SolutionRecord
        include_fk = True
        load_instance = True


def experiment_data(
    result: ExperimentResult, manifest: RunManifest | None = None
) -> dict[str, Any]:
    """Experiment row data of a finished experiment."""
    return {
        "objectives": ",".join(o.value for o in ordered(result.config.objective_set)),
        "seed": result.config.seed,
        "runs": result.config.runs,
        "generations": result.config.max_generations,
        "model_sha256": manifest.model_sha256 if manifest else None,
    }


class ExperimentArchive:
    """Experiments and their front members stored through a SQLAlchemy session.

    Args:
        session (orm.Session): Session used for every query
        statement_visitors (Optional[list[StatementVisitor]]): Visitors applied to
            solution queries, the solution filters and order keys by default

    """

    def __init__(
        self,
        session: orm.Session,
        statement_visitors: Optional[list[StatementVisitor]] = None,
    ):
        self.session = session
        self.experiment_schema = ExperimentRecordSchema(session=session)
        self.solution_schema = SolutionRecordSchema(session=session)
        self._statement_visitors = (
            statement_visitors
            if statement_visitors is not None
            else [SolutionFilterMap(), SolutionOrderByMap()]
        )

    def get(self, name: str) -> ExperimentRecord:
        """Get an experiment.

        Raises:
            NotFoundError: If no experiment has this name

        """
        if record := self.session.get(ExperimentRecord, name):
            return record
        raise NotFoundError(f"No archived experiment named {name!r}")

    def put(self, name: str, data: dict[str, Any]) -> ExperimentRecord:
        """Add an experiment.

        Args:
            name (str): Experiment name
            data (dict[str, Any]): Experiment row data, see :func:`experiment_data`

        Raises:
            ConflictError: If an experiment has this name already

        """
        if name in self:
            raise ConflictError(f"An experiment named {name!r} is archived already")
        record = self.experiment_schema.load({**data, "name": name})
        self.session.add(record)
        self.session.flush()
        return record

    def delete(self, name: str) -> ExperimentRecord:
        """Delete an experiment and its solutions.

        Raises:
            NotFoundError: If no experiment has this name

        """
        record = self.get(name)
        self.session.delete(record)
        self.session.flush()
        return record

    def __contains__(self, name: str) -> bool:
        count = self.session.execute(
            sql.select(sql.func.count(ExperimentRecord.name)).where(
                ExperimentRecord.name == name
            )
        ).scalar()
        return bool(count)

    def add_front(
        self, name: str, individuals: Iterable[Individual], super_front: bool = False
    ) -> list[SolutionRecord]:
        """Store front members of an experiment.

        Raises:
            NotFoundError: If no experiment has this name

        """
        self.get(name)
        records = [
            self.solution_schema.load(
                {
                    "experiment_name": name,
                    "solution_id": ind.solution_id,
                    "run": ind.run,
                    "super_front": super_front,
                    "power": ind.phenotype.power,
                    "response_time": (
                        ind.phenotype.response_time
                        if math.isfinite(ind.phenotype.response_time)
                        else None
                    ),
                    "cost": ind.phenotype.cost,
                    "complexity": ind.phenotype.complexity,
                    "genotype": json.dumps(dump_sequence(ind.genotype)),
                }
            )
            for ind in individuals
        ]
        self.session.add_all(records)
        self.session.flush()
        logger.info("Archived %d solutions of %s", len(records), name)
        return records

    def _visit(self, stmt, kwargs: dict[str, Any]):
        for visitor in self._statement_visitors:
            stmt = visitor.visit_statement(stmt, kwargs)
        return stmt

    def index(self, **kwargs) -> list[SolutionRecord]:
        """Solutions matching the given filters, in the given order.

        Raises:
            OrderByException: If ``order_by`` names an unknown key

        """
        stmt = self._visit(sql.select(SolutionRecord), kwargs)
        if not kwargs.get("order_by"):
            stmt = stmt.order_by(SolutionRecord.id)
        return [*self.session.execute(stmt).scalars().all()]

    def count_index(self, **kwargs) -> int:
        """Count solutions matching the given filters."""
        stmt = self._visit(sql.select(sql.func.count(SolutionRecord.id)), kwargs)
        return self.session.execute(stmt).scalar_one()

    def objective_samples(
        self, name: str, super_front: bool = False
    ) -> dict[Objective, list[float]]:
        """Objective values of an experiment's solutions, saturated ones as ``inf``.

        Raises:
            NotFoundError: If no experiment has this name

        """
        self.get(name)
        samples: dict[Objective, list[float]] = {o: [] for o in Objective}
        for record in self.index(experiment=name, super_front=super_front):
            for objective in Objective:
                value = getattr(record, objective.value)
                samples[objective].append(math.inf if value is None else value)
        return samples

    def individuals(self, name: str, super_front: bool = True) -> list[Individual]:
        """Solutions of an experiment as individuals.

        Raises:
            NotFoundError: If no experiment has this name

        """
        active = parse_objectives(self.get(name).objectives)
        return [
            Individual(
                genotype=load_sequence(json.loads(record.genotype)),
                phenotype=ObjectiveVector(
                    power=record.power,
                    response_time=(
                        math.inf
                        if record.response_time is None
                        else record.response_time
                    ),
                    cost=record.cost,
                    complexity=record.complexity,
                    active=active,
                ),
                solution_id=record.solution_id,
                run=record.run,
            )
            for record in self.index(experiment=name, super_front=super_front)
        ]


@contextlib.contextmanager
def open_archive(url: str) -> Iterator[ExperimentArchive]:
    """Archive at a database URL, creating its tables if needed.

    Commits when the block succeeds and rolls back otherwise.

    """
    engine = sql.create_engine(url)
    Base.metadata.create_all(bind=engine)
    session = orm.sessionmaker(bind=engine)()
    try:
        yield ExperimentArchive(session)
        session.commit()
    except BaseException:
        session.rollback()
        raise
    finally:
        session.close()
        engine.dispose()
