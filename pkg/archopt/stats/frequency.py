"""Frequencies of refactoring actions in Pareto fronts, and raw distributions."""

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import pandas as pd

from archopt.objectives import Objective
from archopt.refactor import ActionKind, RefactoringAction, RefactoringSequence

NEW_NODE = "new-node"
MISSING = "—"


def destination_of(action: RefactoringAction) -> str | None:
    """Where an action relocates its target; created nodes show as ``new-node``."""
    if action.destination is not None:
        return action.destination
    if action.kind in (ActionKind.REDO, ActionKind.MOTN):
        return NEW_NODE
    return None


@dataclass(frozen=True)
class FrequencyRow:
    """Occurrences of one (kind, target, destination) triple."""

    kind: ActionKind
    target: str
    destination: str | None
    count: int
    percentage: float

    @property
    def key(self) -> tuple[ActionKind, str, str | None]:
        """The counted triple."""
        return self.kind, self.target, self.destination


@dataclass(frozen=True)
class FrequencyReport:
    """Action frequencies of one experiment, most frequent first."""

    rows: tuple[FrequencyRow, ...]

    @property
    def total(self) -> int:
        """Number of actions counted."""
        return sum(row.count for row in self.rows)

    def to_frame(self) -> pd.DataFrame:
        """Rows as a frame with columns kind, target, destination, count, percentage."""
        return pd.DataFrame(
            [
                {
                    "kind": row.kind.value,
                    "target": row.target,
                    "destination": row.destination,
                    "count": row.count,
                    "percentage": row.percentage,
                }
                for row in self.rows
            ],
            columns=["kind", "target", "destination", "count", "percentage"],
        )


def action_frequencies(genotypes: Iterable[RefactoringSequence]) -> FrequencyReport:
    """Tally every action of every genotype.

    Args:
        genotypes (Iterable[RefactoringSequence]): Genotypes of front members

    Returns:
        FrequencyReport: Counts with their percentage of all actions, ordered by
        decreasing count then by kind, target and destination

    """
    counts = Counter(
        (action.kind, action.target, destination_of(action))
        for genotype in genotypes
        for action in genotype
    )
    total = sum(counts.values())
    ordered_keys = sorted(
        counts,
        key=lambda key: (-counts[key], key[0].value, key[1], key[2] or ""),
    )
    return FrequencyReport(
        tuple(
            FrequencyRow(*key, counts[key], 100.0 * counts[key] / total)
            for key in ordered_keys
        )
    )


def _cell(row: FrequencyRow | None) -> str:
    if row is None:
        return MISSING
    return f"{row.percentage:.2f}% ({row.count})"


def compare_frequencies(reports: Mapping[str, FrequencyReport]) -> pd.DataFrame:
    """Side-by-side frequencies of several experiments.

    Rows are the union of counted triples, ordered like the first experiment's
    report and then like the following ones. Element kinds are prefixed as
    ``(N)``, ``(C)`` or ``(O)``; absent actions show ``—``.

    """
    by_key = {
        name: {row.key: row for row in report.rows} for name, report in reports.items()
    }
    keys: list[tuple[ActionKind, str, str | None]] = []
    for report in reports.values():
        keys.extend(row.key for row in report.rows if row.key not in keys)
    records = []
    for kind, target, destination in keys:
        record = {
            "type": kind.value,
            "target": f"({kind.target_kind.value}) {target}",
            "to": (
                MISSING
                if destination is None
                else f"({kind.destination_kind.value}) {destination}"
            ),
        }
        for name, rows in by_key.items():
            record[name] = _cell(rows.get((kind, target, destination)))
        records.append(record)
    return pd.DataFrame(records, columns=["type", "target", "to", *reports])


def distribution_frame(
    samples: Mapping[str, Mapping[Objective, Sequence[float]]],
) -> pd.DataFrame:
    """Long-form objective values with columns experiment, objective, value."""
    return pd.DataFrame(
        [
            {"experiment": experiment, "objective": objective.value, "value": value}
            for experiment, by_objective in samples.items()
            for objective, values in by_objective.items()
            for value in values
        ],
        columns=["experiment", "objective", "value"],
    )
