"""Multi-run experiments and their output directory."""

import hashlib
import json
import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from marshmallow import Schema, fields

import archopt
from archopt.model import Architecture, dump_architecture
from archopt.objectives import Evaluator, Objective
from archopt.stats import distribution_frame

from .config import ExperimentConfig, dump_config
from .exc import ConfigError
from .fronts import objective_samples, run_front_name, solution_id, write_front
from .nsga2 import NSGA2, Individual, super_front

logger = logging.getLogger(__name__)

THREADS_ENV = "ARCHOPT_THREADS"
SUPER_FRONT_NAME = "super-front.jsonl"
MANIFEST_NAME = "manifest.json"
DISTRIBUTIONS_NAME = "distributions.csv"


@dataclass
class RunResult:
    """Outcome of one run."""

    run: int
    seed: int
    front: list[Individual]
    history: list[dict[Objective, float]] = field(default_factory=list)
    evaluations: int = 0
    elapsed: float = 0.0


@dataclass
class ExperimentResult:
    """Outcome of all runs of an experiment."""

    config: ExperimentConfig
    runs: list[RunResult]
    started: datetime
    finished: datetime

    @property
    def fronts(self) -> list[list[Individual]]:
        """Per-run fronts, by run."""
        return [run.front for run in self.runs]

    @property
    def super_front(self) -> list[Individual]:
        """Non-dominated members of all per-run fronts."""
        return super_front(self.fronts, self.config.objective_set)


def run_once(config: ExperimentConfig, arch0: Architecture, run: int) -> RunResult:
    """Run NSGA-II once with the run's own seed and evaluator.

    Front members get their solution ids and run index.

    """
    seed = config.run_seed(run)
    started = time.perf_counter()
    evaluator = Evaluator(arch0, config.params, config.complexity, config.objective_set)
    algorithm = NSGA2(config, arch0, random.Random(seed), evaluator)
    front = algorithm.evolve()
    for index, individual in enumerate(front):
        individual.solution_id = solution_id(run, index)
        individual.run = run
    elapsed = time.perf_counter() - started
    logger.info(
        "Run %d (seed %d): %d solutions, %d evaluations, %.2fs",
        run,
        seed,
        len(front),
        evaluator.evaluations,
        elapsed,
    )
    return RunResult(
        run, seed, front, algorithm.history, evaluator.evaluations, elapsed
    )


def worker_count(config: ExperimentConfig) -> int:
    """Parallel runs: the config's ``threads``, else ``ARCHOPT_THREADS``, else CPUs.

    Raises:
        ConfigError: If ``ARCHOPT_THREADS`` is not a positive integer

    """
    threads = config.threads
    if threads is None and (raw := os.environ.get(THREADS_ENV)):
        try:
            threads = int(raw)
        except ValueError as err:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from err
        if threads < 1:
            raise ConfigError(f"{THREADS_ENV} must be positive, got {threads}")
    return max(1, min(threads or os.cpu_count() or 1, config.runs))


def run_experiment(config: ExperimentConfig, arch0: Architecture) -> ExperimentResult:
    """Run every run of an experiment, in parallel threads.

    Results do not depend on the number of threads.

    """
    started = datetime.now(timezone.utc)
    workers = worker_count(config)
    logger.info(
        "Starting %d runs of %d generations on %d threads",
        config.runs,
        config.max_generations,
        workers,
    )
    with ThreadPoolExecutor(max_workers=workers) as executor:
        runs = list(
            executor.map(lambda run: run_once(config, arch0, run), range(config.runs))
        )
    return ExperimentResult(config, runs, started, datetime.now(timezone.utc))


@dataclass(frozen=True)
class RunManifest:
    """What it takes to regenerate an experiment.

    Args:
        config (dict[str, Any]): Configuration snapshot
        seed (int): Master seed
        run_seeds (list[int]): Seed of every run
        model_sha256 (str): Digest of the model
        version (str): Package version
        started (datetime): Start, UTC
        finished (datetime): End, UTC

    """

    config: dict[str, Any]
    seed: int
    run_seeds: list[int]
    model_sha256: str
    version: str
    started: datetime
    finished: datetime


class RunManifestSchema(Schema):
    """Manifest file schema."""

    config = fields.Dict(required=True)
    seed = fields.Int(required=True)
    run_seeds = fields.List(fields.Int(), required=True)
    model_sha256 = fields.Str(required=True)
    version = fields.Str(required=True)
    started = fields.AwareDateTime(required=True)
    finished = fields.AwareDateTime(required=True)


def model_digest(arch: Architecture, model_path: str | Path | None = None) -> str:
    """SHA-256 of the model file, or of the model's canonical JSON form."""
    if model_path is not None:
        data = Path(model_path).read_bytes()
    else:
        data = json.dumps(dump_architecture(arch), sort_keys=True).encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def manifest_of(
    result: ExperimentResult,
    arch0: Architecture,
    model_path: str | Path | None = None,
) -> RunManifest:
    """Manifest of a finished experiment."""
    return RunManifest(
        config=dump_config(result.config),
        seed=result.config.seed,
        run_seeds=[run.seed for run in result.runs],
        model_sha256=model_digest(arch0, model_path),
        version=archopt.__version__,
        started=result.started,
        finished=result.finished,
    )


def write_experiment(
    result: ExperimentResult,
    arch0: Architecture,
    out_dir: str | Path,
    model_path: str | Path | None = None,
    name: str | None = None,
) -> RunManifest:
    """Write per-run fronts, the super front, the manifest and raw distributions.

    Args:
        result (ExperimentResult): The experiment
        arch0 (Architecture): Its initial architecture
        out_dir (str | Path): Output directory, created if missing
        model_path (str | Path | None): Model file, hashed into the manifest
        name (str | None): Experiment name in the distributions file, the output
            directory's name by default

    Returns:
        RunManifest: The manifest written

    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    generations = result.config.max_generations
    for run in result.runs:
        write_front(run.front, generations, out / run_front_name(run.run))
    write_front(result.super_front, generations, out / SUPER_FRONT_NAME)
    manifest = manifest_of(result, arch0, model_path)
    (out / MANIFEST_NAME).write_text(
        json.dumps(RunManifestSchema().dump(manifest), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    frame = distribution_frame({name or out.name: objective_samples(result.fronts)})
    frame.to_csv(out / DISTRIBUTIONS_NAME, index=False)
    logger.info("Experiment written to %s", out)
    return manifest
