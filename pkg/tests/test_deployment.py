"""Tests for the function and stream processing cost models."""

from decimal import Decimal

import pytest

from costbench.deployment import (
    container_hourly_price,
    cost_shares,
    dsp_hourly_cost,
    dump_deployment,
    faas_hourly_cost,
    hourly_cost,
    load_deployment,
    node_count,
    vcpu_for_memory,
)
from costbench.exceptions import InvalidCapacity, ValidationError, ZeroTotal
from costbench.flatfile import parse_flat
from costbench.models import (
    AccessProfile,
    CostDimension,
    DspDeployment,
    DspKind,
    FaasDeployment,
    HourlyCost,
    Platform,
    UseCase,
)
from costbench.usecase import access_profile

from tests.conftest import REPO_ROOT

DEPLOYMENTS = REPO_ROOT / "deployments"
UC1 = access_profile(UseCase.UC1, Platform.FAAS)
UC2_FAAS = access_profile(UseCase.UC2, Platform.FAAS)


def faas(duration_ms="80", access=UC1) -> FaasDeployment:
    return FaasDeployment(label="fn", memory_mb=256, duration_ms=Decimal(duration_ms), access=access)


def dsp(kind=DspKind.SELF_MANAGED_K8S, **fields) -> DspDeployment:
    return DspDeployment(kind=kind, label="dsp", access=UC1, **fields)


@pytest.mark.parametrize("path", sorted(DEPLOYMENTS.glob("*.env")), ids=lambda p: p.stem)
def test_shipped_descriptors_load(path):
    """Test that every shipped descriptor validates."""
    deployment = load_deployment(path)
    assert deployment.label == path.stem


def test_vcpu_tiers():
    """Test the memory to vCPU tier rule."""
    assert vcpu_for_memory(256) == Decimal("0.1667")
    assert vcpu_for_memory(200) == Decimal("0.1667")
    assert vcpu_for_memory(2048) == Decimal("1")
    with pytest.raises(ValidationError):
        vcpu_for_memory(16384)


def test_loaded_function_gets_vcpu_share():
    """Test that a descriptor without vcpu_fraction gets its tier's share."""
    deployment = load_deployment(DEPLOYMENTS / "gcf-java-uc1.env", UC1)
    assert deployment.vcpu_fraction == Decimal("0.1667")
    assert deployment.access == UC1


def test_dump_deployment_round_trip():
    """Test that a dumped descriptor parses to the same fields."""
    deployment = load_deployment(DEPLOYMENTS / "flink-autopilot.env")
    values = parse_flat(dump_deployment(deployment))
    assert values["kind"] == "serverless-k8s"
    assert Decimal(values["per_instance_vcpu"]) == Decimal("2")
    assert "access" not in values


def test_faas_cost_is_linear(baseline_catalog):
    """Test C(2 rate) = 2 C(rate) exactly and C(0) = 0."""
    deployment = faas()
    for rate in (Decimal("0"), Decimal("1"), Decimal("7.5"), Decimal("100"), Decimal("1000")):
        single = faas_hourly_cost(deployment, rate, baseline_catalog)
        double = faas_hourly_cost(deployment, rate * 2, baseline_catalog)
        assert double.total == 2 * single.total
        for dim in CostDimension:
            assert double.component(dim) == 2 * single.component(dim)
    assert faas_hourly_cost(deployment, 0, baseline_catalog).total == 0


def test_faas_cost_components(baseline_catalog):
    """Test the function cost terms at 1 event/s."""
    cost = faas_hourly_cost(faas(), 1, baseline_catalog)
    assert cost.component(CostDimension.INVOCATION) == Decimal("3600") * Decimal("0.0000004")
    # 0.25 GB for 0.08 s per invocation
    assert cost.component(CostDimension.COMPUTE_DURATION) == Decimal("3600") * Decimal("0.02") * Decimal("0.00001852")
    assert cost.component(CostDimension.DB_WRITE) == Decimal("3600") * Decimal("0.00000117")
    assert cost.component(CostDimension.VM) == 0
    assert cost.total == sum(cost.components.values())


def test_negative_rate_rejected(baseline_catalog):
    """Test that a negative arrival rate is invalid."""
    with pytest.raises(ValidationError):
        faas_hourly_cost(faas(), -1, baseline_catalog)


def test_node_count():
    """Test slot packing with three overhead slots on four-slot nodes."""
    deployment = dsp()
    assert [node_count(deployment, m) for m in (1, 2, 5, 6, 7)] == [1, 2, 2, 3, 3]


def test_self_managed_decomposition(baseline_catalog):
    """Test fixed, per-request and step parts summing to the total."""
    cost = dsp_hourly_cost(dsp(), Decimal("200"), baseline_catalog, 2)
    assert cost.component(CostDimension.CLUSTER_FEE) == Decimal("0.10")
    assert cost.component(CostDimension.LB_FEE) == Decimal("0.025")
    assert cost.component(CostDimension.VM) == 2 * Decimal("0.1726")
    assert cost.component(CostDimension.DB_WRITE) == Decimal("200") * 3600 * Decimal("0.00000117")
    assert cost.component(CostDimension.INVOCATION) == 0
    assert cost.total == sum(cost.components.values())


def test_dsp_cost_constant_without_request_prices(baseline_catalog):
    """Test that only step terms remain when per-request prices are zero."""
    catalog = baseline_catalog.model_copy(
        update={"per_db_read": Decimal("0"), "per_db_write": Decimal("0"), "per_message": Decimal("0")}
    )
    costs = {dsp_hourly_cost(dsp(), rate, catalog, 1).total for rate in (1, 10, 100)}
    assert len(costs) == 1


def test_serverless_dsp_pays_per_instance(baseline_catalog):
    """Test one VM per instance and no fees."""
    cost = dsp_hourly_cost(dsp(DspKind.SERVERLESS_DSP), Decimal("10"), baseline_catalog, 3)
    assert cost.component(CostDimension.VM) == 3 * Decimal("0.1726")
    assert cost.component(CostDimension.CLUSTER_FEE) == 0


def test_serverless_k8s_container_minimums(autopilot_catalog):
    """Test that tiny containers are charged the catalog minimum."""
    small = dsp(DspKind.SERVERLESS_K8S, per_instance_vcpu=Decimal("0.1"), per_instance_gb=Decimal("0.1"))
    price = container_hourly_price(small, autopilot_catalog)
    assert price == Decimal("0.25") * Decimal("0.0574") + Decimal("0.5") * Decimal("0.00635")

    cost = dsp_hourly_cost(small, 0, autopilot_catalog, 2)
    assert cost.component(CostDimension.CONTAINER) == 5 * price
    assert cost.component(CostDimension.VM) == 0


def test_invalid_capacity(baseline_catalog):
    """Test that fewer than one instance is rejected."""
    with pytest.raises(InvalidCapacity):
        dsp_hourly_cost(dsp(), 1, baseline_catalog, 0)
    with pytest.raises(InvalidCapacity):
        hourly_cost(dsp(), 1, baseline_catalog)


def test_uc2_function_shares_dominated_by_writes(baseline_catalog):
    """Test that database writes outweigh reads, which outweigh invocations."""
    cost = faas_hourly_cost(faas("250", UC2_FAAS), 10, baseline_catalog)
    shares = cost_shares(cost)
    assert shares[CostDimension.DB_WRITE] > shares[CostDimension.DB_READ] > shares[CostDimension.INVOCATION]
    assert shares[CostDimension.DB_WRITE] > 0.5
    assert sum(shares.values()) == pytest.approx(1.0)


def test_cost_shares_zero_total():
    """Test that shares of a zero cost raise."""
    with pytest.raises(ZeroTotal):
        cost_shares(HourlyCost.from_components({}))


def test_access_profile_counts_scale_costs(baseline_catalog):
    """Test that per-event accesses multiply the database terms."""
    double = AccessProfile(db_reads_per_event=2, db_writes_per_event=2, messages_per_event=1)
    one = faas_hourly_cost(faas(access=UC1), 1, baseline_catalog)
    two = faas_hourly_cost(faas(access=double), 1, baseline_catalog)
    assert two.component(CostDimension.DB_WRITE) == 2 * one.component(CostDimension.DB_WRITE)
    assert two.component(CostDimension.DB_READ) == 2 * Decimal("3600") * Decimal("0.00000039")
