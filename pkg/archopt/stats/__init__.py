"""Penalty statistics and refactoring action frequencies."""

from .exc import ObjectiveMismatchError
from .frequency import (
    FrequencyReport,
    FrequencyRow,
    action_frequencies,
    compare_frequencies,
    destination_of,
    distribution_frame,
)
from .psp import (
    Magnitude,
    PSPReport,
    PSPRow,
    classify_magnitude,
    cliffs_delta,
    cliffs_delta_pairs,
    hodges_lehmann,
    mann_whitney_u,
    psp,
    psp_row,
)

__all__ = [
    "FrequencyReport",
    "FrequencyRow",
    "Magnitude",
    "ObjectiveMismatchError",
    "PSPReport",
    "PSPRow",
    "action_frequencies",
    "classify_magnitude",
    "cliffs_delta",
    "cliffs_delta_pairs",
    "compare_frequencies",
    "destination_of",
    "distribution_frame",
    "hodges_lehmann",
    "mann_whitney_u",
    "psp",
    "psp_row",
]
