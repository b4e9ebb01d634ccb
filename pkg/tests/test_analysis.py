"""Tests for cost curves, break-even points and comparison reports."""

from decimal import Decimal

import pytest

from costbench.analysis import (
    break_even,
    compare_report,
    cost_curve,
    cost_per_request,
    relative_delta,
    scenario_curve,
)
from costbench.exceptions import GridMismatch, NoFeasibleCapacity, ScenarioError
from costbench.models import (
    CostCurve,
    CostDimension,
    CostPoint,
    DspDeployment,
    DspKind,
    FaasDeployment,
    HourlyCost,
    Platform,
    SutModel,
    UseCase,
)
from costbench.scenario import load_scenario
from costbench.usecase import access_profile

from tests.conftest import scenario_path


def flat_curve(label, points):
    """Curve whose totals are put into the VM dimension."""
    return CostCurve(
        label=label,
        points=[
            CostPoint(rate=Decimal(rate), cost=HourlyCost.from_components({CostDimension.VM: Decimal(total)}))
            for rate, total in points
        ],
    )


def test_break_even_interpolates():
    """Test 0.2 USD/h constant against 0.001 USD/h per event/s."""
    faas = flat_curve("faas", [(100, "0.1"), (300, "0.3")])
    dsp = flat_curve("dsp", [(100, "0.2"), (300, "0.2")])
    result = break_even(faas, dsp)
    assert result.rate == Decimal(200)
    assert (result.lower, result.upper) == (Decimal(100), Decimal(300))


def test_break_even_on_grid_point():
    """Test an exact tie on a grid point."""
    faas = flat_curve("faas", [(100, "0.1"), (200, "0.2"), (300, "0.3")])
    dsp = flat_curve("dsp", [(100, "0.2"), (200, "0.2"), (300, "0.2")])
    assert break_even(faas, dsp).rate == Decimal(200)


def test_no_break_even_in_range():
    """Test that functions cheaper everywhere give no break-even."""
    faas = flat_curve("faas", [(1, "0.01"), (10, "0.1")])
    dsp = flat_curve("dsp", [(1, "1"), (10, "1")])
    result = break_even(faas, dsp)
    assert result.rate is None and result.lower is None and result.upper is None


def test_identical_curves_break_even_at_first_point():
    """Test that ties resolve to the stream processing side."""
    curve = flat_curve("a", [(5, "1"), (10, "2")])
    result = break_even(curve, curve)
    assert result.rate == Decimal(5)
    assert result.lower == result.upper == Decimal(5)


def test_break_even_grid_mismatch():
    """Test that curves on different grids are rejected."""
    with pytest.raises(GridMismatch) as info:
        break_even(flat_curve("a", [(1, "1"), (2, "2")]), flat_curve("b", [(1, "1")]))
    assert info.value.left == "a" and info.value.right == "b"


def test_faas_curve_is_linear(baseline_catalog):
    """Test that function curves pass through the origin linearly."""
    deployment = FaasDeployment(
        label="fn", memory_mb=256, duration_ms=Decimal("80"), access=access_profile(UseCase.UC1, Platform.FAAS)
    )
    curve = cost_curve(deployment, [Decimal(x) for x in (0, 1, 2, 4, 8)], baseline_catalog)
    totals = [point.cost.total for point in curve.points]
    assert totals[0] == 0
    assert totals[2] == 2 * totals[1] and totals[4] == 2 * totals[3] == 8 * totals[1]
    assert all(point.capacity is None for point in curve.points)


def test_dsp_curve_steps(baseline_catalog, default_policy):
    """Test that the VM part steps up with the capacity profile."""
    deployment = DspDeployment(kind=DspKind.SELF_MANAGED_K8S, label="dsp", slots_per_node=1, fixed_overhead_slots=0)
    curve = cost_curve(
        deployment, [Decimal(x) for x in (50, 150, 250)], baseline_catalog,
        sut=SutModel(per_instance_capacity=100), policy=default_policy, duration_s=120, seed=1,
    )
    assert [point.capacity.m_star for point in curve.points] == [1, 2, 3]
    vm = [point.cost.component(CostDimension.VM) for point in curve.points]
    assert vm[0] < vm[1] < vm[2]
    assert vm[1] - vm[0] == baseline_catalog.per_vm_hour


def test_dsp_curve_requires_sut(baseline_catalog):
    """Test that a stream processing curve without a SUT model is an error."""
    deployment = DspDeployment(kind=DspKind.SELF_MANAGED_K8S, label="dsp")
    with pytest.raises(ScenarioError):
        cost_curve(deployment, [Decimal(1)], baseline_catalog)


def test_dsp_curve_propagates_infeasibility(baseline_catalog, default_policy):
    """Test that an unservable load aborts the curve."""
    deployment = DspDeployment(kind=DspKind.SELF_MANAGED_K8S, label="dsp")
    with pytest.raises(NoFeasibleCapacity):
        cost_curve(
            deployment, [Decimal(1000)], baseline_catalog,
            sut=SutModel(per_instance_capacity=1), policy=default_policy, m_max=8, duration_s=120,
        )


def test_stateful_break_even_is_far_below_stateless():
    """Test break-even ordering of the shipped baseline scenarios."""
    uc1 = break_even(scenario_curve(load_scenario(scenario_path("uc1-faas"))),
                     scenario_curve(load_scenario(scenario_path("uc1-dsp"))))
    uc2 = break_even(scenario_curve(load_scenario(scenario_path("uc2-faas"))),
                     scenario_curve(load_scenario(scenario_path("uc2-dsp"))))
    assert uc1.rate is not None and uc2.rate is not None
    assert uc2.rate < uc1.rate
    assert uc1.rate / uc2.rate >= 10
    assert (uc1.lower, uc1.upper) == (Decimal(100), Decimal(200))
    assert (uc2.lower, uc2.upper) == (Decimal(2), Decimal(5))


def test_serverless_k8s_premium_shrinks_with_load():
    """Test that autopilot costs more everywhere with a nonincreasing relative gap."""
    baseline = scenario_curve(load_scenario(scenario_path("uc1-dsp")))
    autopilot = scenario_curve(load_scenario(scenario_path("uc1-dsp-autopilot")))
    gaps = []
    for base, auto in zip(baseline.points, autopilot.points):
        assert auto.cost.total >= base.cost.total
        gaps.append((auto.cost.total - base.cost.total) / base.cost.total)
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert relative_delta(autopilot, baseline) > 0


def test_cost_per_request(baseline_catalog):
    """Test per-million-request costs of a function curve."""
    curve = scenario_curve(load_scenario(scenario_path("uc1-faas")))
    per_million = cost_per_request(curve)
    assert per_million[CostDimension.DB_WRITE] == Decimal("1.17")
    assert per_million[CostDimension.INVOCATION] == Decimal("0.4")
    assert per_million[CostDimension.VM] == 0


def test_relative_delta():
    """Test the mean relative difference over the grid."""
    a = flat_curve("a", [(1, "1.1"), (2, "3")])
    b = flat_curve("b", [(1, "1"), (2, "2")])
    assert relative_delta(a, b) == pytest.approx(0.3)


def test_report_single_function_scenario():
    """Test a report of one function scenario."""
    report = compare_report([load_scenario(scenario_path("uc1-faas"))])
    assert len(report.curves) == 1
    assert report.break_evens == []
    assert report.relative_deltas == {}
    assert report.shares["uc1-faas"][CostDimension.DB_WRITE.value] > 0.5


def test_report_baseline_pair():
    """Test that the function/stream processing pair yields one break-even."""
    report = compare_report([
        load_scenario(scenario_path("uc1-dsp")),
        load_scenario(scenario_path("uc1-faas")),
    ])
    assert len(report.break_evens) == 1
    entry = report.break_evens[0]
    assert (entry.faas, entry.dsp) == ("uc1-faas", "uc1-dsp")
    assert Decimal(100) < entry.break_even.rate < Decimal(200)
    assert report.catalog_diffs[0].differences == []
    assert "less than or equal" in report.tie_rule


def test_report_grid_mismatch_names_both_scenarios():
    """Test that differing grids abort the report."""
    a = load_scenario(scenario_path("uc1-faas"), grid="1,2,5")
    b = load_scenario(scenario_path("uc1-dsp"), grid="1,2")
    with pytest.raises(GridMismatch) as info:
        compare_report([a, b])
    assert {info.value.left, info.value.right} == {"uc1-faas", "uc1-dsp"}


def test_report_attaches_scenario_label():
    """Test that evaluation errors carry the failing scenario."""
    scenario = load_scenario(scenario_path("uc1-dsp"), grid="100000")
    with pytest.raises(NoFeasibleCapacity) as info:
        compare_report([scenario])
    assert "uc1-dsp" in str(info.value)


def test_report_rejects_shared_label_across_files():
    """Test that two different scenario files may not share a label."""
    faas = load_scenario(scenario_path("uc1-faas"))
    dsp = load_scenario(scenario_path("uc1-dsp")).model_copy(update={"label": "uc1-faas"})
    with pytest.raises(ScenarioError) as info:
        compare_report([faas, dsp])
    assert "uc1-faas" in str(info.value)


def test_report_pairs_curves_by_position():
    """Test that each break-even uses the curves of its own two scenarios."""
    faas = load_scenario(scenario_path("uc1-faas"))
    dsp = load_scenario(scenario_path("uc1-dsp"))
    report = compare_report([faas, dsp, faas])
    direct = break_even(report.curves[0], report.curves[1])
    assert [entry.break_even for entry in report.break_evens[::2]] == [direct, direct]
    assert report.break_evens[1].break_even.rate == Decimal(1)
    assert report.break_evens[2].faas == "uc1-faas"
