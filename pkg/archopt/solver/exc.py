"""Exceptions for the performance solver."""


class InfeasibleResultError(Exception):
    """A saturated solver result was used where a feasible one is required."""
