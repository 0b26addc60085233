"""SQL archive of experiments and their Pareto fronts."""

from .exc import ConflictError, NotFoundError, OrderByException
from .filter import FilterMap, OrderByMap, SolutionFilterMap, SolutionOrderByMap
from .models import Base, ExperimentRecord, SolutionRecord
from .storage import (
    ExperimentArchive,
    ExperimentRecordSchema,
    SolutionRecordSchema,
    experiment_data,
    open_archive,
)
from .visitor import StatementVisitor

__all__ = [
    "Base",
    "ConflictError",
    "ExperimentArchive",
    "ExperimentRecord",
    "ExperimentRecordSchema",
    "FilterMap",
    "NotFoundError",
    "OrderByException",
    "OrderByMap",
    "SolutionFilterMap",
    "SolutionOrderByMap",
    "SolutionRecord",
    "SolutionRecordSchema",
    "StatementVisitor",
    "experiment_data",
    "open_archive",
]
