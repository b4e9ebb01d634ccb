"""Cost curves, break-even points and multi-scenario comparison reports."""

from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger

from costbench.capacity import capacity_profile
from costbench.deployment import SECONDS_PER_HOUR, cost_shares, hourly_cost
from costbench.exceptions import CostBenchError, GridMismatch, ScenarioError
from costbench.models import (
    BreakEven,
    BreakEvenEntry,
    CatalogDiffEntry,
    CatalogDifference,
    CostCurve,
    CostDimension,
    CostPoint,
    Deployment,
    FaasDeployment,
    HourlyCost,
    Platform,
    PricingCatalog,
    Report,
    SloPolicy,
    SutModel,
)
from costbench.pricing import catalog_diff
from costbench.scenario import Scenario

PER_MILLION = Decimal(1_000_000)
RATE_QUANTUM = Decimal("0.000001")

TIE_RULE = (
    "break-even is the first sampled load where the stream processing total is "
    "less than or equal to the function total; equal costs count as a crossing"
)


def cost_curve(
    deployment: Deployment,
    loads: Sequence[Decimal],
    catalog: PricingCatalog,
    sut: Optional[SutModel] = None,
    policy: Optional[SloPolicy] = None,
    m_max: int = 64,
    duration_s: float = 300.0,
    seed: int = 0,
    label: Optional[str] = None
) -> CostCurve:
    """Hourly cost of a deployment at every load level.

    Stream processing deployments run the capacity search per load and keep
    its result on each point.

    Args:
        deployment: Function or stream processing descriptor
        loads: Strictly increasing arrival rates
        catalog: Unit prices
        sut: Required for stream processing deployments
        policy: Required for stream processing deployments
        m_max: Largest instance count the search may use
        duration_s: Simulated seconds per probe
        seed: Scenario seed
        label: Curve label (defaults to the deployment label)

    Returns:
        Cost curve over the loads

    Raises:
        ScenarioError: If a stream processing deployment lacks sut or policy
        NoFeasibleCapacity: If a load cannot be served within m_max
    """
    loads = [rate if isinstance(rate, Decimal) else Decimal(str(rate)) for rate in loads]
    label = label or deployment.label

    if isinstance(deployment, FaasDeployment):
        points = [CostPoint(rate=rate, cost=hourly_cost(deployment, rate, catalog)) for rate in loads]
    else:
        if sut is None or policy is None:
            raise ScenarioError(f"'{label}': stream processing curves need a sut and an slo policy")
        profile = capacity_profile(loads, sut, policy, m_max, duration_s, seed)
        points = [
            CostPoint(
                rate=rate,
                cost=hourly_cost(deployment, rate, catalog, profile[rate].m_star),
                capacity=profile[rate]
            )
            for rate in loads
        ]

    curve = CostCurve(label=label, points=points)
    logger.info(f"Computed cost curve '{label}' over {len(points)} loads")
    return curve


def _check_grids(a: CostCurve, b: CostCurve) -> None:
    if a.rates != b.rates:
        raise GridMismatch(a.label, b.label, f"{len(a.rates)} vs {len(b.rates)} points")


def break_even(curve_faas: CostCurve, curve_dsp: CostCurve) -> BreakEven:
    """Load at which stream processing becomes no more expensive than functions.

    The crossing is located on the sampled grid and refined by linear
    interpolation between the bracketing points. A crossing at the first
    grid point is reported as that point.

    Args:
        curve_faas: Linear-cost curve
        curve_dsp: Step-cost curve on the same grid

    Returns:
        Interpolated load and its bracket; all None without a crossing

    Raises:
        GridMismatch: If the curves use different grids
    """
    _check_grids(curve_faas, curve_dsp)

    previous = None
    for faas, dsp in zip(curve_faas.points, curve_dsp.points):
        gap = dsp.cost.total - faas.cost.total
        if gap <= 0:
            if previous is None:
                return BreakEven(rate=faas.rate, lower=faas.rate, upper=faas.rate)
            lower, lower_gap = previous
            rate = lower + (faas.rate - lower) * lower_gap / (lower_gap - gap)
            return BreakEven(rate=rate.quantize(RATE_QUANTUM), lower=lower, upper=faas.rate)
        previous = (faas.rate, gap)

    logger.warning(f"No break-even between '{curve_faas.label}' and '{curve_dsp.label}' in range")
    return BreakEven()


def cost_per_request(curve: CostCurve) -> Dict[CostDimension, Decimal]:
    """USD per 1,000,000 requests by dimension, averaged over loads above zero."""
    loaded = [point for point in curve.points if point.rate > 0]
    if not loaded:
        return {dim: Decimal("0") for dim in CostDimension}
    result = {}
    for dim in CostDimension:
        per_request = [
            point.cost.component(dim) / (point.rate * SECONDS_PER_HOUR) for point in loaded
        ]
        result[dim] = sum(per_request, Decimal("0")) / len(loaded) * PER_MILLION
    return result


def relative_delta(curve_a: CostCurve, curve_b: CostCurve) -> float:
    """Mean of (total_a - total_b) / total_b over the shared grid.

    Points where curve_b costs nothing are skipped.

    Raises:
        GridMismatch: If the curves use different grids
    """
    _check_grids(curve_a, curve_b)
    ratios = [
        (a.cost.total - b.cost.total) / b.cost.total
        for a, b in zip(curve_a.points, curve_b.points)
        if b.cost.total > 0
    ]
    if not ratios:
        return 0.0
    return float(sum(ratios, Decimal("0")) / len(ratios))


def summed_cost(curve: CostCurve) -> HourlyCost:
    """Component-wise sum of a curve's hourly costs."""
    totals = {dim: Decimal("0") for dim in CostDimension}
    for point in curve.points:
        for dim, value in point.cost.components.items():
            totals[dim] += value
    return HourlyCost.from_components(totals)


def scenario_curve(scenario: Scenario) -> CostCurve:
    """Cost curve of a loaded scenario, labelled with the scenario label."""
    return cost_curve(
        scenario.deployment,
        scenario.loads,
        scenario.catalog,
        sut=scenario.sut,
        policy=scenario.policy,
        m_max=scenario.m_max,
        duration_s=scenario.duration_s,
        seed=scenario.seed,
        label=scenario.label,
    )


def _check_labels(scenarios: Sequence[Scenario]) -> None:
    # Report sections and curve files are keyed by label.
    paths: Dict[str, Path] = {}
    for scenario in scenarios:
        path = Path(scenario.path).resolve()
        other = paths.setdefault(scenario.label, path)
        if other != path:
            raise ScenarioError(
                f"scenario label '{scenario.label}' is used by both {other} and {path}"
            )


Evaluated = Tuple[Scenario, CostCurve]


def _pair_roles(a: Evaluated, b: Evaluated) -> Tuple[Evaluated, Evaluated]:
    # The function scenario plays the linear side; same-platform pairs keep input order.
    if a[0].platform == Platform.DSP and b[0].platform == Platform.FAAS:
        return b, a
    return a, b


def compare_report(scenarios: Sequence[Scenario]) -> Report:
    """Evaluate scenarios and assemble one comparison report.

    Break-even points are computed for every pair of scenarios; in mixed
    pairs the function scenario is the linear side. Relative deltas and
    catalog differences are taken against the first scenario.

    Args:
        scenarios: At least one loaded scenario

    Returns:
        Report with curves, break-evens, shares and differences

    Raises:
        CostBenchError: Any evaluation error, with the scenario label attached
    """
    if not scenarios:
        raise ScenarioError("compare needs at least one scenario")
    _check_labels(scenarios)

    curves: List[CostCurve] = []
    for scenario in scenarios:
        try:
            curves.append(scenario_curve(scenario))
        except CostBenchError as exc:
            if not exc.detail:
                exc.detail = f"scenario '{scenario.label}'"
            raise

    evaluated = list(zip(scenarios, curves))
    break_evens = []
    for i, left in enumerate(evaluated):
        for right in evaluated[i + 1:]:
            (linear, linear_curve), (step, step_curve) = _pair_roles(left, right)
            break_evens.append(
                BreakEvenEntry(
                    faas=linear.label,
                    dsp=step.label,
                    break_even=break_even(linear_curve, step_curve)
                )
            )

    shares = {}
    for curve in curves:
        total = summed_cost(curve)
        shares[curve.label] = (
            {dim.value: share for dim, share in cost_shares(total).items()} if total.total > 0 else {}
        )

    base, base_curve = scenarios[0], curves[0]
    report = Report(
        scenarios=[scenario.label for scenario in scenarios],
        tie_rule=TIE_RULE,
        curves=curves,
        break_evens=break_evens,
        shares=shares,
        per_million_requests={
            curve.label: {dim.value: value for dim, value in cost_per_request(curve).items()}
            for curve in curves
        },
        relative_deltas={curve.label: relative_delta(curve, base_curve) for curve in curves[1:]},
        catalog_diffs=[
            CatalogDiffEntry(
                a=base.label,
                b=scenario.label,
                differences=[
                    CatalogDifference(field=name, a_value=left, b_value=right)
                    for name, left, right in catalog_diff(base.catalog, scenario.catalog)
                ]
            )
            for scenario in scenarios[1:]
        ],
    )
    logger.info(f"Compared {len(scenarios)} scenario(s), {len(break_evens)} break-even(s)")
    return report
