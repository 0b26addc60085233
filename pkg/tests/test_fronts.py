"""Test front files."""

import json
import math
from pathlib import Path

import pytest

from archopt.objectives import BASELINE_OBJECTIVES, Objective
from archopt.refactor import ActionKind, RefactoringAction
from archopt.search import (
    FrontFileError,
    objective_samples,
    read_front,
    read_front_dir,
    run_front_name,
    write_front,
)
from tests.factories import drop, individual

# pylint: disable=missing-function-docstring,redefined-outer-name


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
            (
                RefactoringAction(ActionKind.MOVE, "getAccount", destination="user"),
                RefactoringAction(ActionKind.REDO, "sso", new_instance="t2.micro"),
            ),
            active=BASELINE_OBJECTIVES,
            solution_id="r00-01",
            run=0,
        ),
    ]


class TestFrontFiles:
    """Test writing and reading front files."""

    def test_read_what_was_written(self, tmp_path: Path, front):
        path = tmp_path / run_front_name(0)
        write_front(front, 200, path)
        loaded = read_front(path)
        assert [ind.genotype for ind in loaded] == [ind.genotype for ind in front]
        assert [ind.phenotype for ind in loaded] == [ind.phenotype for ind in front]
        assert [(ind.solution_id, ind.run) for ind in loaded] == [
            ("r00-00", 0),
            ("r00-01", 0),
        ]
        assert loaded[0].phenotype.active == BASELINE_OBJECTIVES

    def test_rows_carry_every_field(self, tmp_path: Path, front):
        path = tmp_path / "front.jsonl"
        write_front(front, 200, path)
        rows = [json.loads(line) for line in path.read_text().splitlines()]
        assert rows[0]["generations"] == 200
        assert rows[0]["objectives"] == ["response_time", "cost", "complexity"]
        assert rows[0]["genotype"] == [
            {
                "kind": "DROP",
                "target": "notification",
                "destination": None,
                "new_instance": None,
            }
        ]
        assert rows[1]["phenotype"]["response_time"] == "infeasible"

    def test_identical_fronts_give_identical_bytes(self, tmp_path: Path, front):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_front(front, 5, first)
        write_front(front, 5, second)
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.parametrize(
        "line",
        [
            "{not json",
            json.dumps({"solution_id": "x", "generations": 1}),
            json.dumps(
                {
                    "solution_id": "x",
                    "generations": 1,
                    "objectives": ["power"],
                    "genotype": [{"kind": "MOVE", "target": "op"}],
                    "phenotype": {
                        "power": 1,
                        "response_time": 1,
                        "cost": 1,
                        "complexity": 1,
                    },
                }
            ),
        ],
    )
    def test_malformed_line_is_located(self, tmp_path: Path, front, line: str):
        path = tmp_path / "front.jsonl"
        write_front(front[:1], 1, path)
        path.write_text(path.read_text() + line + "\n")
        with pytest.raises(FrontFileError, match="line 2"):
            read_front(path)

    def test_blank_lines_are_skipped(self, tmp_path: Path, front):
        path = tmp_path / "front.jsonl"
        write_front(front, 1, path)
        path.write_text(path.read_text() + "\n\n")
        assert len(read_front(path)) == 2


class TestFrontDirectories:
    """Test reading the per-run fronts of an experiment."""

    def test_fronts_are_ordered_by_run(self, tmp_path: Path, front):
        write_front(front[:1], 1, tmp_path / run_front_name(10))
        write_front(front, 1, tmp_path / run_front_name(2))
        write_front(front, 1, tmp_path / "super-front.jsonl")
        assert [len(f) for f in read_front_dir(tmp_path)] == [2, 1]

    def test_empty_directory_raises(self, tmp_path: Path):
        with pytest.raises(FrontFileError):
            read_front_dir(tmp_path)

    def test_samples_pool_every_front(self, front):
        samples = objective_samples([front, front[:1]])
        assert samples[Objective.POWER] == [10.0, 12.0, 10.0]
        assert math.isinf(samples[Objective.RESPONSE_TIME][1])
        assert set(samples) == set(Objective)
