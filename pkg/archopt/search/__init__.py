"""NSGA-II search over refactoring sequences and multi-run experiments."""

from .config import (
    ExperimentConfig,
    ExperimentConfigSchema,
    config_from,
    dump_config,
    read_config,
)
from .exc import ConfigError, FrontFileError
from .experiment import (
    ExperimentResult,
    RunManifest,
    RunManifestSchema,
    RunResult,
    model_digest,
    run_experiment,
    run_once,
    worker_count,
    write_experiment,
)
from .fronts import (
    objective_samples,
    read_front,
    read_front_dir,
    run_front_name,
    write_front,
)
from .nsga2 import (
    NSGA2,
    Individual,
    crowding_distance,
    dominates,
    evolve,
    fast_nondominated_sort,
    nondominated,
    super_front,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentConfigSchema",
    "ExperimentResult",
    "FrontFileError",
    "Individual",
    "NSGA2",
    "RunManifest",
    "RunManifestSchema",
    "RunResult",
    "config_from",
    "crowding_distance",
    "dominates",
    "dump_config",
    "evolve",
    "fast_nondominated_sort",
    "model_digest",
    "nondominated",
    "objective_samples",
    "read_config",
    "read_front",
    "read_front_dir",
    "run_experiment",
    "run_front_name",
    "run_once",
    "super_front",
    "worker_count",
    "write_experiment",
    "write_front",
]
