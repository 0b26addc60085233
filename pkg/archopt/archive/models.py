"""Archive tables."""

from datetime import datetime

import sqlalchemy as sqla
from sqlalchemy import orm

# pylint: disable=too-few-public-methods


class Base(orm.DeclarativeBase):
    """Base class of the archive tables."""


class ExperimentRecord(Base):
    """An archived experiment."""

    __tablename__ = "experiments"
    name: orm.Mapped[str] = orm.mapped_column(primary_key=True)
    objectives: orm.Mapped[str]
    seed: orm.Mapped[int]
    runs: orm.Mapped[int]
    generations: orm.Mapped[int]
    model_sha256: orm.Mapped[str | None]
    created: orm.Mapped[datetime] = orm.mapped_column(
        sqla.DateTime(timezone=True), server_default=sqla.func.now()
    )
    solutions = orm.relationship(
        "SolutionRecord",
        uselist=True,
        back_populates="experiment",
        cascade="all, delete-orphan",
    )


class SolutionRecord(Base):
    """A front member of an archived experiment.

    ``response_time`` is ``None`` for saturated solutions; ``genotype`` holds the
    action list as JSON.

    """

    __tablename__ = "solutions"
    id: orm.Mapped[int] = orm.mapped_column(primary_key=True, autoincrement=True)
    experiment_name: orm.Mapped[str] = orm.mapped_column(
        sqla.ForeignKey(ExperimentRecord.name)
    )
    solution_id: orm.Mapped[str]
    run: orm.Mapped[int | None]
    super_front: orm.Mapped[bool] = orm.mapped_column(default=False)
    power: orm.Mapped[float]
    response_time: orm.Mapped[float | None]
    cost: orm.Mapped[float]
    complexity: orm.Mapped[float]
    genotype: orm.Mapped[str]
    experiment = orm.relationship(ExperimentRecord, back_populates="solutions")
