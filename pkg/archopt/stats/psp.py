"""Prospective sustainability penalty between two experiments.

All differences are taken as power-aware minus baseline: a negative value means
the power-aware experiment found lower values of that objective.
"""

import enum
import logging
from dataclasses import dataclass, fields
from typing import Mapping, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from archopt.objectives import Objective

from .exc import ObjectiveMismatchError

logger = logging.getLogger(__name__)

SIGNIFICANCE = 0.05
EXACT_LIMIT = 400
REPORT_ORDER = (
    Objective.COST,
    Objective.COMPLEXITY,
    Objective.POWER,
    Objective.RESPONSE_TIME,
)


class Magnitude(str, enum.Enum):
    """Cliff's delta effect size labels."""

    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


MAGNITUDE_THRESHOLDS = (
    (0.147, Magnitude.NEGLIGIBLE),
    (0.33, Magnitude.SMALL),
    (0.474, Magnitude.MEDIUM),
)


def _sample(values: Sequence[float], name: str) -> np.ndarray:
    sample = np.asarray(values, dtype=float)
    if sample.size == 0:
        raise ValueError(f"Sample {name} is empty")
    return sample


def hodges_lehmann(x: Sequence[float], y: Sequence[float]) -> float:
    """Median of all pairwise differences ``x_i - y_j``.

    Raises:
        ValueError: If a sample is empty

    """
    differences = np.subtract.outer(_sample(x, "x"), _sample(y, "y"))
    return float(np.median(differences))


def mann_whitney_u(
    x: Sequence[float], y: Sequence[float], method: str | None = None
) -> tuple[float, float]:
    """Two-sided Mann-Whitney U test.

    The exact null distribution is used when ``len(x) * len(y) <= 400`` and the
    pooled samples are free of ties; the normal approximation with tie and
    continuity corrections is used otherwise. ``method`` forces ``"exact"`` or
    ``"asymptotic"``.

    Returns:
        tuple[float, float]: U statistic of ``x`` (ties count one half) and p-value

    Raises:
        ValueError: If a sample is empty

    """
    first, second = _sample(x, "x"), _sample(y, "y")
    pooled = np.concatenate([first, second])
    n1n2 = first.size * second.size
    if np.all(pooled == pooled[0]):
        return n1n2 / 2, 1.0
    if method is None:
        tied = np.unique(pooled).size < pooled.size
        method = "exact" if n1n2 <= EXACT_LIMIT and not tied else "asymptotic"
        if n1n2 <= EXACT_LIMIT and tied:
            logger.warning("Ties in samples, using the normal approximation")
    result = stats.mannwhitneyu(
        first, second, alternative="two-sided", method=method, use_continuity=True
    )
    return float(result.statistic), float(min(result.pvalue, 1.0))


def cliffs_delta(u: float, n1: int, n2: int) -> float:
    """Cliff's delta from the U statistic: ``2U / (n1 n2) - 1``.

    Raises:
        ValueError: If a sample size is not positive or U is out of range

    """
    if n1 <= 0 or n2 <= 0:
        raise ValueError(f"Sample sizes must be positive, got {n1} and {n2}")
    if not 0 <= u <= n1 * n2:
        raise ValueError(f"U must lie in [0, {n1 * n2}], got {u}")
    return 2 * u / (n1 * n2) - 1


def cliffs_delta_pairs(x: Sequence[float], y: Sequence[float]) -> float:
    """Cliff's delta by counting pairs: ``(#(x > y) - #(x < y)) / (n1 n2)``."""
    signs = np.sign(np.subtract.outer(_sample(x, "x"), _sample(y, "y")))
    return float(signs.sum() / signs.size)


def classify_magnitude(delta: float) -> Magnitude:
    """Effect size label of ``|delta|``: 0.147, 0.33 and 0.474 split the labels."""
    size = abs(delta)
    for threshold, label in MAGNITUDE_THRESHOLDS:
        if size < threshold:
            return label
    return Magnitude.LARGE


@dataclass(frozen=True)
class PSPRow:  # pylint: disable=too-many-instance-attributes
    """Penalty of one objective.

    ``psp_delta`` is 0 and ``magnitude`` negligible unless ``mwu_p`` is below the
    significance level.

    """

    objective: Objective
    mean_difference: float
    hl: float
    mwu_p: float
    cliffs_delta: float
    magnitude: Magnitude
    psp_hl: float
    psp_delta: float
    baseline_mean: float
    baseline_median: float
    power_aware_mean: float
    power_aware_median: float

    @property
    def psp(self) -> tuple[float, float]:
        """The penalty pair ``(hl, delta)``."""
        return self.psp_hl, self.psp_delta


@dataclass(frozen=True)
class PSPReport:
    """Penalty of every objective, cost first."""

    rows: tuple[PSPRow, ...]

    def __getitem__(self, objective: Objective) -> PSPRow:
        for row in self.rows:
            if row.objective is Objective(objective):
                return row
        raise KeyError(objective)

    def to_frame(self) -> pd.DataFrame:
        """One row per objective; ``psp`` is rendered as ``"(hl, delta)"``."""
        records = []
        for row in self.rows:
            record = {f.name: getattr(row, f.name) for f in fields(row)}
            record["objective"] = row.objective.value
            record["magnitude"] = row.magnitude.value
            records.append(record)
        frame = pd.DataFrame.from_records(records)
        if frame.empty:
            return frame
        frame.insert(
            frame.columns.get_loc("psp_hl"),
            "psp",
            [f"({row.psp_hl:.6f}, {row.psp_delta:.6f})" for row in self.rows],
        )
        return frame


def _finite(values: Sequence[float], label: str) -> np.ndarray:
    sample = np.asarray(values, dtype=float)
    kept = sample[np.isfinite(sample)]
    if dropped := sample.size - kept.size:
        logger.warning("Dropped %d non-finite values from %s", dropped, label)
    return kept


def psp_row(
    objective: Objective, baseline: Sequence[float], power_aware: Sequence[float]
) -> PSPRow:
    """Penalty of one objective; non-finite values are left out of the samples.

    Raises:
        ValueError: If a sample has no finite value

    """
    base = _finite(baseline, f"baseline {objective.value}")
    power = _finite(power_aware, f"power-aware {objective.value}")
    if base.size == 0 or power.size == 0:
        raise ValueError(f"No finite {objective.value} values to compare")
    hl = hodges_lehmann(power, base)
    u, p = mann_whitney_u(power, base)
    delta = cliffs_delta(u, power.size, base.size)
    significant = p < SIGNIFICANCE
    return PSPRow(
        objective=objective,
        mean_difference=float(power.mean() - base.mean()),
        hl=hl,
        mwu_p=p,
        cliffs_delta=delta,
        magnitude=classify_magnitude(delta) if significant else Magnitude.NEGLIGIBLE,
        psp_hl=hl,
        psp_delta=delta if significant else 0.0,
        baseline_mean=float(base.mean()),
        baseline_median=float(np.median(base)),
        power_aware_mean=float(power.mean()),
        power_aware_median=float(np.median(power)),
    )


def psp(
    baseline: Mapping[Objective, Sequence[float]],
    power_aware: Mapping[Objective, Sequence[float]],
) -> PSPReport:
    """Prospective sustainability penalty of every objective.

    Args:
        baseline (Mapping[Objective, Sequence[float]]): Objective values pooled over
            every per-run front of the baseline experiment
        power_aware (Mapping[Objective, Sequence[float]]): The same for the
            power-aware experiment

    Returns:
        PSPReport: One row per objective

    Raises:
        ObjectiveMismatchError: If the two experiments report different objectives

    """
    if set(baseline) != set(power_aware):
        raise ObjectiveMismatchError(
            f"Baseline reports {sorted(o.value for o in baseline)}, power-aware"
            f" reports {sorted(o.value for o in power_aware)}"
        )
    rows = tuple(
        psp_row(objective, baseline[objective], power_aware[objective])
        for objective in REPORT_ORDER
        if objective in baseline
    )
    return PSPReport(rows)

