"""Test the experiment archive."""

import math
from pathlib import Path

import pytest

from archopt.archive import (
    ConflictError,
    ExperimentArchive,
    NotFoundError,
    OrderByException,
    experiment_data,
    open_archive,
)
from archopt.model import load_fixture
from archopt.objectives import BASELINE_OBJECTIVES, Objective
from archopt.refactor import ActionKind, RefactoringAction
from archopt.search import ExperimentConfig, run_experiment
from tests.factories import drop, individual

# pylint: disable=missing-function-docstring,redefined-outer-name

BASELINE_DATA = {
    "objectives": "response_time,cost,complexity",
    "seed": 0,
    "runs": 2,
    "generations": 200,
}


@pytest.fixture
def archive():
    with open_archive("sqlite://") as archive:
        yield archive


@pytest.fixture
def front():
    return [
        individual(
            (10.0, 25.5, 0.5, 3.6),
            (drop("notification"),),
            active=BASELINE_OBJECTIVES,
            solution_id="r00-00",
            run=0,
        ),
        individual(
            (12.0, math.inf, 0.4, 6.0),
            (RefactoringAction(ActionKind.MOVE, "getAccount", destination="user"),),
            active=BASELINE_OBJECTIVES,
            solution_id="r00-01",
            run=0,
        ),
        individual(
            (8.0, 30.0, 0.7, 1.2),
            (RefactoringAction(ActionKind.CLON, "seat"),),
            active=BASELINE_OBJECTIVES,
            solution_id="r01-00",
            run=1,
        ),
    ]


@pytest.fixture
def stored(archive: ExperimentArchive, front):
    archive.put("baseline", BASELINE_DATA)
    archive.add_front("baseline", front)
    archive.add_front("baseline", front[:1], super_front=True)
    return archive


class TestExperiments:
    """Test storing experiments."""

    def test_put_and_get(self, archive: ExperimentArchive):
        archive.put("baseline", {**BASELINE_DATA, "model_sha256": "ab" * 32})
        record = archive.get("baseline")
        assert record.objectives == "response_time,cost,complexity"
        assert (record.seed, record.runs, record.generations) == (0, 2, 200)
        assert record.model_sha256 == "ab" * 32
        assert record.created is not None
        assert "baseline" in archive
        assert "power-aware" not in archive

    def test_put_twice_raises(self, archive: ExperimentArchive):
        archive.put("baseline", BASELINE_DATA)
        with pytest.raises(ConflictError):
            archive.put("baseline", BASELINE_DATA)

    def test_get_missing_raises(self, archive: ExperimentArchive):
        with pytest.raises(NotFoundError):
            archive.get("baseline")

    def test_delete_removes_solutions(self, stored: ExperimentArchive):
        stored.delete("baseline")
        assert "baseline" not in stored
        assert stored.count_index(experiment="baseline") == 0
        with pytest.raises(NotFoundError):
            stored.delete("baseline")

    def test_experiment_data(self):
        config = ExperimentConfig(
            population_size=8,
            max_generations=2,
            runs=1,
            seed=5,
            objective_set=BASELINE_OBJECTIVES,
        )
        data = experiment_data(run_experiment(config, load_fixture()))
        assert data == {
            "objectives": "response_time,cost,complexity",
            "seed": 5,
            "runs": 1,
            "generations": 2,
            "model_sha256": None,
        }


class TestSolutions:
    """Test storing and querying front members."""

    def test_front_of_unknown_experiment_raises(
        self, archive: ExperimentArchive, front
    ):
        with pytest.raises(NotFoundError):
            archive.add_front("baseline", front)

    def test_saturated_response_time_is_null(self, stored: ExperimentArchive):
        records = stored.index(experiment="baseline", super_front=False)
        assert [record.response_time for record in records] == [25.5, None, 30.0]
        assert records[0].genotype.startswith("[")

    @pytest.mark.parametrize(
        "filters, expected",
        [
            ({"super_front": False}, ["r00-00", "r00-01", "r01-00"]),
            ({"super_front": True}, ["r00-00"]),
            ({"super_front": False, "run": 1}, ["r01-00"]),
            ({"super_front": False, "max_cost": 0.5}, ["r00-00", "r00-01"]),
            ({"max_power": 10.0, "max_complexity": 2.0}, ["r01-00"]),
            ({"max_response_time": 26.0}, ["r00-00", "r00-00"]),
            ({"experiment": "power-aware"}, []),
        ],
    )
    def test_index_filters(self, stored: ExperimentArchive, filters, expected):
        assert [r.solution_id for r in stored.index(**filters)] == expected
        assert stored.count_index(**filters) == len(expected)

    @pytest.mark.parametrize(
        "order_by, expected",
        [
            ("-power", ["r00-01", "r00-00", "r01-00"]),
            ("complexity", ["r01-00", "r00-00", "r00-01"]),
            ("-run,solution_id", ["r01-00", "r00-00", "r00-01"]),
        ],
    )
    def test_index_order(self, stored: ExperimentArchive, order_by, expected):
        records = stored.index(super_front=False, order_by=order_by)
        assert [r.solution_id for r in records] == expected

    def test_unknown_order_raises(self, stored: ExperimentArchive):
        with pytest.raises(OrderByException):
            stored.index(order_by="speed")

    def test_objective_samples(self, stored: ExperimentArchive):
        samples = stored.objective_samples("baseline")
        assert samples[Objective.POWER] == [10.0, 12.0, 8.0]
        assert math.isinf(samples[Objective.RESPONSE_TIME][1])
        assert stored.objective_samples("baseline", super_front=True)[
            Objective.COST
        ] == [0.5]

    def test_individuals_load_back(self, stored: ExperimentArchive, front):
        loaded = stored.individuals("baseline", super_front=False)
        assert [ind.genotype for ind in loaded] == [ind.genotype for ind in front]
        assert [ind.phenotype for ind in loaded] == [ind.phenotype for ind in front]
        assert [(ind.solution_id, ind.run) for ind in loaded] == [
            ("r00-00", 0),
            ("r00-01", 0),
            ("r01-00", 1),
        ]
        assert loaded[0].phenotype.active == BASELINE_OBJECTIVES
        assert len(stored.individuals("baseline")) == 1


class TestOpenArchive:
    """Test archive sessions."""

    def test_committed_on_success(self, tmp_path: Path, front):
        url = f"sqlite:///{tmp_path / 'archive.db'}"
        with open_archive(url) as archive:
            archive.put("baseline", BASELINE_DATA)
            archive.add_front("baseline", front)
        with open_archive(url) as archive:
            assert "baseline" in archive
            assert archive.count_index(experiment="baseline") == 3

    def test_rolled_back_on_error(self, tmp_path: Path):
        url = f"sqlite:///{tmp_path / 'archive.db'}"
        with pytest.raises(RuntimeError):
            with open_archive(url) as archive:
                archive.put("baseline", BASELINE_DATA)
                raise RuntimeError("interrupted")
        with open_archive(url) as archive:
            assert "baseline" not in archive
