"""Map filter and order_by parameters of archive queries to sqlalchemy clauses."""

import functools
import importlib
import operator
from typing import Any, Callable, Generator

from sqlalchemy.sql.expression import desc

from .exc import OrderByException
from .visitor import StatementVisitor, T

# pylint: disable=too-few-public-methods

MODELS_MODULE = "archopt.archive.models"


def _resolve(module: Any, path: str) -> Any:
    target = module
    for child in path.split("."):
        target = getattr(target, child)
    return target


class FilterMap(StatementVisitor):
    """Map filter parameters to where clauses.

    Args:
        filters (dict[str, Any]): Parameter name to ``"Model.attr"`` or to a
            ``("Model.attr", operator)`` pair; the operator defaults to equality
        import_from (str): The module to import Model classes from

    Example:
        .. code-block:: python

            FilterMap({
                "run": "SolutionRecord.run",
                "max_cost": ("SolutionRecord.cost", operator.le),
            }, "archopt.archive.models")

    """

    filters: dict[str, Callable]

    def __init__(self, filters: dict[str, Any], import_from: str) -> None:
        module = importlib.import_module(import_from)
        self.filters = {}
        for name, exprs in filters.items():
            attr, op_ = exprs if isinstance(exprs, tuple) else (exprs, operator.eq)
            self.filters[name] = functools.partial(op_, _resolve(module, attr))

    def visit_statement(self, statement: T, params: dict[str, Any]) -> T:
        """Add a where clause per known parameter; other parameters are ignored."""
        return statement.where(*self._generate_whereclauses(params))

    def _generate_whereclauses(
        self, given_filters: dict[str, Any]
    ) -> Generator[Any, None, None]:
        for attr, filtered_by in given_filters.items():
            if attr in self.filters and filtered_by is not None:
                yield self.filters[attr](filtered_by)


class OrderByMap(StatementVisitor):
    """Map the ``order_by`` parameter to order_by clauses.

    ``order_by`` is a comma separated list of keys, each optionally prefixed by
    ``-`` for descending order.

    Args:
        order_by_attributes (dict[str, str]): Key to ``"Model.attr"``
        import_from (str): The module to import Model classes from

    """

    order_by_attributes: dict[str, Any]

    def __init__(self, order_by_attributes: dict[str, str], import_from: str) -> None:
        module = importlib.import_module(import_from)
        self.order_by_attributes = {
            key: _resolve(module, column) for key, column in order_by_attributes.items()
        }

    def visit_statement(self, statement: T, params: dict[str, Any]) -> T:
        """Order the statement; unchanged without an ``order_by`` parameter.

        Raises:
            OrderByException: On an unknown key

        """
        if not params.get("order_by"):
            return statement
        return statement.order_by(*self._generate_order_by(params["order_by"]))

    def _generate_order_by(self, order_by: str):
        for attr in order_by.split(","):
            descending = attr.startswith("-")
            attr = attr.lstrip("-")
            if attr not in self.order_by_attributes:
                raise OrderByException(f"Unknown order_by attribute: {attr}")
            column = self.order_by_attributes[attr]
            yield desc(column) if descending else column


class SolutionFilterMap(FilterMap):
    """Filters of archived solutions.

    ``experiment``, ``run`` and ``super_front`` match exactly; ``max_power``,
    ``max_response_time``, ``max_cost`` and ``max_complexity`` are inclusive upper
    bounds.

    """

    def __init__(self) -> None:
        super().__init__(
            {
                "experiment": "SolutionRecord.experiment_name",
                "run": "SolutionRecord.run",
                "super_front": "SolutionRecord.super_front",
                "max_power": ("SolutionRecord.power", operator.le),
                "max_response_time": ("SolutionRecord.response_time", operator.le),
                "max_cost": ("SolutionRecord.cost", operator.le),
                "max_complexity": ("SolutionRecord.complexity", operator.le),
            },
            MODELS_MODULE,
        )


class SolutionOrderByMap(OrderByMap):
    """Order keys of archived solutions: each objective, ``run`` and ``solution_id``."""

    def __init__(self) -> None:
        super().__init__(
            {
                "power": "SolutionRecord.power",
                "response_time": "SolutionRecord.response_time",
                "cost": "SolutionRecord.cost",
                "complexity": "SolutionRecord.complexity",
                "run": "SolutionRecord.run",
                "solution_id": "SolutionRecord.solution_id",
            },
            MODELS_MODULE,
        )
