"""Performance solver module.

Nodes are solved as independent open M/M/1 queues with additive link latency, an
approximation of a layered queueing network. The system response time is the
arrival-rate-weighted mean of the scenario response times.
"""

from .exc import InfeasibleResultError
from .solver import (
    INFEASIBLE,
    SATURATION_EPSILON,
    Entry,
    OpenQueueingSolver,
    PerformanceSolver,
    SolverResult,
    build_queueing_model,
    solve,
)

__all__ = [
    "Entry",
    "INFEASIBLE",
    "InfeasibleResultError",
    "OpenQueueingSolver",
    "PerformanceSolver",
    "SATURATION_EPSILON",
    "SolverResult",
    "build_queueing_model",
    "solve",
]
