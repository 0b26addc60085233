"""Test the attribution of power and cost to request types."""

import logging
import random

import pytest

from archopt.attribution import (
    ROW_COLUMNS,
    SUMMARY_COLUMNS,
    attribute,
    attribute_sequences,
    attribution_frame,
    entry_cost,
    entry_power,
    idle_frame,
    request_cost,
    request_power,
    summarize,
)
from archopt.model import Architecture, UnknownElementError, load_fixture
from archopt.objectives import PowerParams, eval_power, node_power
from archopt.refactor import ActionKind, RefactoringAction, RefactoringSequence
from archopt.solver import Entry, InfeasibleResultError, SolverResult, solve
from tests.factories import (
    random_architecture,
    tiny_architecture,
    two_node_architecture,
)

# pylint: disable=missing-function-docstring,redefined-outer-name


@pytest.fixture(scope="module")
def fixture_arch() -> Architecture:
    return load_fixture()


class TestConservation:
    """Attributed power and cost add up to what the nodes draw."""

    def test_random_architectures(self):
        rng = random.Random(41)
        params = PowerParams()
        for _ in range(200):
            arch = random_architecture(rng)
            result = solve(arch)
            report = attribute(arch, result, params)
            assert sum(report.per_scenario_power.values()) == pytest.approx(
                report.total_power, abs=1e-9
            )
            assert sum(report.per_scenario_cost.values()) == pytest.approx(
                report.total_cost, abs=1e-9
            )
            for node in arch.used_nodes:
                entries = result.entries_on(node.id)
                if result.node_utilization[node.id] == 0:
                    continue
                instance = arch.instance_of(node.id)
                assert sum(
                    entry_power(entry, result, params) for entry in entries
                ) == pytest.approx(
                    node_power(result.node_utilization[node.id], instance, params),
                    abs=1e-9,
                )
                assert sum(entry_cost(entry, result) for entry in entries) == (
                    pytest.approx(instance.cost, abs=1e-9)
                )

    def test_idle_nodes_complete_the_total(self, fixture_arch: Architecture):
        params = PowerParams()
        result = solve(fixture_arch)
        report = attribute(fixture_arch, result, params)
        idle_power = sum(idle.power_w for idle in report.unattributed)
        assert report.total_power + idle_power == pytest.approx(
            eval_power(fixture_arch, result, params)
        )


class TestEntryShares:
    """Test the power and cost of single entries."""

    @pytest.fixture
    def shared_node(self) -> tuple[Entry, Entry, SolverResult]:
        first = Entry("s1", 0, "op1", "n1")
        second = Entry("s1", 1, "op1", "n1")
        result = SolverResult(
            node_utilization={"n1": 0.5},
            entry_utilization={first: 0.2, second: 0.3},
            entry_residence={first: 1.0, second: 1.0},
            scenario_response={"s1": 2.0},
            system_response=2.0,
            feasible=True,
            architecture=tiny_architecture(instance="d2.2xlarge"),
        )
        return first, second, result

    def test_entry_power(self, shared_node):
        first, second, result = shared_node
        params = PowerParams(0.3)
        assert entry_power(first, result, params) == pytest.approx(21.684)
        assert entry_power(first, result, params) + entry_power(
            second, result, params
        ) == pytest.approx(54.21)

    def test_entry_cost(self, shared_node):
        first, second, result = shared_node
        assert entry_cost(first, result) == pytest.approx(0.46 * 0.4)
        assert entry_cost(second, result) == pytest.approx(0.46 * 0.6)


class TestAttribute:
    """Test per-scenario reports."""

    def test_single_scenario_takes_everything(self):
        arch = two_node_architecture()
        result = solve(arch)
        params = PowerParams(0.5)
        report = attribute(arch, result, params)
        assert report.per_scenario_power["s1"] == pytest.approx(
            eval_power(arch, result, params)
        )
        assert report.per_scenario_cost["s1"] == pytest.approx(0.03 + 0.004)
        assert report.share_power("s1") == pytest.approx(1.0)
        assert report.unattributed == ()

    def test_idle_node_is_unattributed(self, fixture_arch: Architecture):
        report = attribute(fixture_arch, solve(fixture_arch), PowerParams(0.7))
        assert [idle.node for idle in report.unattributed] == ["notification"]
        idle = report.unattributed[0]
        assert idle.cost_usd_h == pytest.approx(0.03)
        assert idle.power_w == pytest.approx(0.7 * 14.1)

    def test_fixture_shares(self, fixture_arch: Architecture):
        report = attribute(fixture_arch, solve(fixture_arch), PowerParams())
        assert set(report.per_scenario_power) == {
            "Login",
            "Update user details",
            "Rebook a ticket",
        }
        assert sum(
            report.share_power(s) for s in report.per_scenario_power
        ) == pytest.approx(1.0)
        assert sum(
            report.share_cost(s) for s in report.per_scenario_cost
        ) == pytest.approx(1.0)

    def test_saturated_architecture_raises(self):
        arch = tiny_architecture(demand=1000.0)
        with pytest.raises(InfeasibleResultError):
            attribute(arch, solve(arch), PowerParams())

    def test_unknown_scenario_raises(self):
        result = solve(tiny_architecture())
        with pytest.raises(UnknownElementError, match="nope"):
            request_power("nope", result, PowerParams())
        with pytest.raises(UnknownElementError, match="nope"):
            request_cost("nope", result)


class TestReports:
    """Test attribution of front members and the frames written out."""

    @pytest.fixture
    def reports(self):
        arch = tiny_architecture(arrival_rate=23.35, instance="d2.2xlarge")
        slower = RefactoringAction(ActionKind.REDO, "c1", new_instance="t2.micro")
        faster = RefactoringAction(ActionKind.REDO, "c1", new_instance="m6i.xlarge")
        return attribute_sequences(
            arch,
            [
                ("initial", RefactoringSequence()),
                ("saturated", RefactoringSequence((slower,))),
                ("faster", RefactoringSequence((faster,))),
            ],
            PowerParams(),
        )

    def test_saturated_solutions_are_skipped(self, reports):
        assert list(reports) == ["initial", "faster"]

    def test_skip_is_logged(self, caplog: pytest.LogCaptureFixture):
        arch = tiny_architecture(arrival_rate=23.35, instance="d2.2xlarge")
        slower = RefactoringAction(ActionKind.REDO, "c1", new_instance="t2.micro")
        with caplog.at_level(logging.WARNING, logger="archopt.attribution"):
            reports = attribute_sequences(
                arch, [("saturated", RefactoringSequence((slower,)))], PowerParams()
            )
        assert not reports
        assert "saturated" in caplog.text

    def test_attribution_frame(self, reports):
        frame = attribution_frame(reports)
        assert list(frame.columns) == ROW_COLUMNS
        assert list(frame["solution_id"]) == ["initial", "faster"]
        assert set(frame["scenario_id"]) == {"s1"}
        assert list(frame["cost_usd_h"]) == pytest.approx([0.46, 0.13])

    def test_summary(self, reports):
        summary = summarize(list(reports.values()), reports["initial"])
        assert list(summary.columns) == SUMMARY_COLUMNS
        assert list(summary["metric"]) == ["power_w", "cost_usd_h"]
        cost = summary[summary["metric"] == "cost_usd_h"].iloc[0]
        assert cost["initial"] == pytest.approx(0.46)
        assert cost["mean"] == pytest.approx((0.46 + 0.13) / 2)
        assert cost["median"] == pytest.approx((0.46 + 0.13) / 2)

    def test_summary_without_initial(self, reports):
        summary = summarize(list(reports.values()))
        assert summary["initial"].isna().all()

    def test_idle_frame(self, fixture_arch: Architecture):
        report = attribute(fixture_arch, solve(fixture_arch), PowerParams())
        reports = {"r00-00": report}
        frame = idle_frame(reports)
        assert list(frame.columns) == [
            "solution_id",
            "node",
            "power_w",
            "cost_usd_h",
        ]
        assert frame.values.tolist()[0][:2] == ["r00-00", "notification"]
        assert idle_frame({}).empty
