"""Test experiment configuration, multi-run experiments and their output."""

import json
import statistics
from pathlib import Path

import pandas as pd
import pytest
import pytest_mock

import archopt
from archopt.model import Architecture, fixture_path, load_fixture
from archopt.objectives import BASELINE_OBJECTIVES, Objective
from archopt.refactor import ActionKind
from archopt.search import (
    ConfigError,
    ExperimentConfig,
    RunManifestSchema,
    config_from,
    dominates,
    dump_config,
    read_config,
    read_front,
    read_front_dir,
    run_experiment,
    worker_count,
    write_experiment,
)
from archopt.search.experiment import THREADS_ENV
from tests import _dict_to_params

# pylint: disable=missing-function-docstring,redefined-outer-name


@pytest.fixture(scope="module")
def fixture_arch() -> Architecture:
    return load_fixture()


@pytest.fixture
def small_config() -> ExperimentConfig:
    return ExperimentConfig(
        population_size=8, max_generations=3, runs=3, seed=100, threads=2
    )


class TestExperimentConfig:
    """Test experiment settings."""

    def test_defaults(self):
        config = ExperimentConfig()
        assert (config.population_size, config.max_generations, config.runs) == (
            16,
            200,
            31,
        )
        assert (config.crossover_prob, config.mutation_prob) == (0.8, 0.2)
        assert config.max_sequence_length == 4
        assert config.objective_set == frozenset(Objective)
        assert config.complexity[ActionKind.DROP] == 3.0

    @pytest.mark.parametrize(
        "settings",
        **_dict_to_params(
            {
                "odd population": {"population_size": 15},
                "tiny population": {"population_size": 2},
                "probability above one": {"crossover_prob": 1.2},
                "no runs": {"runs": 0},
                "no room for actions": {"max_sequence_length": 0},
                "no threads": {"threads": 0},
                "k out of range": {"k": 2.0},
            }
        ),
    )
    def test_invalid_settings(self, settings: dict):
        with pytest.raises(ConfigError):
            ExperimentConfig(**settings)

    def test_run_seeds_follow_the_master_seed(self):
        assert ExperimentConfig(seed=7).run_seed(3) == 10

    def test_override_skips_none(self):
        config = ExperimentConfig(seed=7).override(seed=None, runs=2)
        assert (config.seed, config.runs) == (7, 2)

    def test_config_file(self, tmp_path: Path):
        path = tmp_path / "config.json"
        path.write_text(
            json.dumps(
                {"objectives": "baseline", "runs": 2, "complexity": {"DROP": 9}}
            ),
            encoding="utf-8",
        )
        config = read_config(path)
        assert config.objective_set == BASELINE_OBJECTIVES
        assert config.runs == 2
        assert config.complexity[ActionKind.DROP] == 9.0
        assert config.population_size == 16

    @pytest.mark.parametrize(
        "data",
        **_dict_to_params(
            {
                "unknown key": {"generations_max": 10},
                "odd population": {"population_size": 5},
                "bad objectives": {"objectives": "speed"},
                "bad complexity": {"complexity": {"JUMP": 1}},
                "negative probability": {"mutation_prob": -0.5},
            }
        ),
    )
    def test_invalid_config_data(self, data: dict):
        with pytest.raises(ConfigError):
            config_from(data)

    def test_unparsable_file(self, tmp_path: Path):
        path = tmp_path / "config.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(ConfigError):
            read_config(path)

    def test_snapshot_loads_back(self):
        config = ExperimentConfig(objective_set=BASELINE_OBJECTIVES, seed=3, k=0.5)
        assert config_from(dump_config(config)) == config


class TestWorkerCount:
    """Test the number of parallel runs."""

    def test_config_wins_over_environment(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(THREADS_ENV, "1")
        assert worker_count(ExperimentConfig(runs=8, threads=3)) == 3

    def test_environment(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(THREADS_ENV, "2")
        assert worker_count(ExperimentConfig(runs=8)) == 2

    def test_capped_at_runs(self, monkeypatch: pytest.MonkeyPatch):
        monkeypatch.setenv(THREADS_ENV, "64")
        assert worker_count(ExperimentConfig(runs=4)) == 4

    def test_cpu_count_fallback(
        self, monkeypatch: pytest.MonkeyPatch, mocker: pytest_mock.MockerFixture
    ):
        monkeypatch.delenv(THREADS_ENV, raising=False)
        mocker.patch("archopt.search.experiment.os.cpu_count", return_value=5)
        assert worker_count(ExperimentConfig(runs=8)) == 5

    @pytest.mark.parametrize("raw", ["many", "0", "-2"])
    def test_invalid_environment(self, monkeypatch: pytest.MonkeyPatch, raw: str):
        monkeypatch.setenv(THREADS_ENV, raw)
        with pytest.raises(ConfigError):
            worker_count(ExperimentConfig(runs=8))


class TestRunExperiment:
    """Test small experiments end to end."""

    def test_runs_are_seeded_and_labeled(
        self, small_config: ExperimentConfig, fixture_arch: Architecture
    ):
        result = run_experiment(small_config, fixture_arch)
        assert [run.run for run in result.runs] == [0, 1, 2]
        assert [run.seed for run in result.runs] == [100, 101, 102]
        for run in result.runs:
            assert run.front
            assert run.evaluations > 0
            assert len(run.history) == small_config.max_generations + 1
            assert [ind.solution_id for ind in run.front] == [
                f"r{run.run:02d}-{i:02d}" for i in range(len(run.front))
            ]
        assert result.started <= result.finished

    def test_super_front_is_nondominated(
        self, small_config: ExperimentConfig, fixture_arch: Architecture
    ):
        result = run_experiment(small_config, fixture_arch)
        merged = result.super_front
        assert merged
        for a in merged:
            assert not any(dominates(b.phenotype, a.phenotype) for b in merged)

    def test_output_directory(
        self,
        small_config: ExperimentConfig,
        fixture_arch: Architecture,
        tmp_path: Path,
    ):
        result = run_experiment(small_config, fixture_arch)
        manifest = write_experiment(result, fixture_arch, tmp_path, fixture_path())
        names = sorted(path.name for path in tmp_path.iterdir())
        assert names == [
            "distributions.csv",
            "front-run-00.jsonl",
            "front-run-01.jsonl",
            "front-run-02.jsonl",
            "manifest.json",
            "super-front.jsonl",
        ]
        assert len(read_front_dir(tmp_path)) == 3
        assert len(read_front(tmp_path / "super-front.jsonl")) == len(
            result.super_front
        )
        loaded = RunManifestSchema().load(
            json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
        )
        assert loaded["run_seeds"] == manifest.run_seeds == [100, 101, 102]
        assert loaded["version"] == archopt.__version__
        assert len(loaded["model_sha256"]) == 64
        assert loaded["config"]["population_size"] == 8
        distributions = pd.read_csv(tmp_path / "distributions.csv")
        assert list(distributions.columns) == ["experiment", "objective", "value"]
        assert set(distributions["experiment"]) == {tmp_path.name}
        assert len(distributions) == 4 * sum(len(f) for f in result.fronts)

    def test_same_seed_gives_identical_files(
        self,
        small_config: ExperimentConfig,
        fixture_arch: Architecture,
        tmp_path: Path,
    ):
        serial = small_config.override(threads=1)
        for name, config in (("first", small_config), ("second", serial)):
            write_experiment(
                run_experiment(config, fixture_arch), fixture_arch, tmp_path / name
            )
        for run in range(3):
            file_name = f"front-run-{run:02d}.jsonl"
            first = (tmp_path / "first" / file_name).read_bytes()
            assert first == (tmp_path / "second" / file_name).read_bytes()
        first = (tmp_path / "first" / "super-front.jsonl").read_bytes()
        assert first == (tmp_path / "second" / "super-front.jsonl").read_bytes()


@pytest.mark.slow
class TestFullExperiment:
    """Both experiments at full size on the bundled model."""

    def test_power_aware_search_lowers_power(self, fixture_arch: Architecture):
        baseline = run_experiment(
            ExperimentConfig(objective_set=BASELINE_OBJECTIVES), fixture_arch
        )
        power_aware = run_experiment(ExperimentConfig(), fixture_arch)
        for result in (baseline, power_aware):
            merged = result.super_front
            objectives = result.config.objective_set
            for a in merged:
                assert not any(
                    dominates(b.phenotype, a.phenotype, objectives) for b in merged
                )
        assert statistics.median(
            ind.phenotype.power for ind in power_aware.super_front
        ) <= statistics.median(ind.phenotype.power for ind in baseline.super_front)
