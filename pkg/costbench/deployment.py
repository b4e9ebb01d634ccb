"""Hourly cost models for function and stream processing deployments.

Function costs are purely per request. Stream processing costs combine a
fixed part (cluster and load balancer fees), a per-request part (database
and transport) and a part that grows in steps as instances are added.
"""

import math
from decimal import Decimal
from pathlib import Path
from typing import Dict, Optional, Union

from loguru import logger

from costbench.exceptions import InvalidCapacity, ValidationError, ZeroTotal
from costbench.flatfile import build_model, dump_flat, read_flat
from costbench.models import (
    AccessProfile,
    CostDimension,
    Deployment,
    DspDeployment,
    DspKind,
    FaasDeployment,
    HourlyCost,
    PricingCatalog,
)

SECONDS_PER_HOUR = Decimal(3600)
MB_PER_GB = Decimal(1024)
MS_PER_S = Decimal(1000)

# Memory tier (MB) -> vCPU share granted by the baseline function platform.
VCPU_TIERS = (
    (128, Decimal("0.0833")),
    (256, Decimal("0.1667")),
    (512, Decimal("0.3333")),
    (1024, Decimal("0.5833")),
    (2048, Decimal("1")),
    (4096, Decimal("2")),
    (8192, Decimal("2")),
)

Rate = Union[Decimal, int, float, str]


def _rate(rate: Rate) -> Decimal:
    value = rate if isinstance(rate, Decimal) else Decimal(str(rate))
    if value < 0:
        raise ValidationError("rate", f"must be non-negative, got {value}")
    return value


def vcpu_for_memory(memory_mb: int) -> Decimal:
    """vCPU share of the smallest memory tier that fits the request."""
    for tier_mb, vcpu in VCPU_TIERS:
        if memory_mb <= tier_mb:
            return vcpu
    raise ValidationError("memory_mb", f"{memory_mb} MB exceeds the largest tier")


def load_deployment(path: Union[str, Path], access: Optional[AccessProfile] = None) -> Deployment:
    """Load a deployment descriptor.

    The access profile is not part of the file; it follows from the use case
    and platform and is injected here.

    Args:
        path: Path to the descriptor file
        access: Per-event resource accesses of the workload

    Returns:
        FaasDeployment or DspDeployment
    """
    values: Dict[str, object] = dict(read_flat(path))
    deployment = build_deployment(values, access or AccessProfile(), str(path))
    kind = getattr(deployment.kind, "value", deployment.kind)
    logger.info(f"Loaded {kind} deployment '{deployment.label}' from {path}")
    return deployment


def build_deployment(values: Dict[str, object], access: AccessProfile, source: str) -> Deployment:
    """Validate descriptor values into the matching deployment model."""
    kind = values.get("kind")
    if kind is None:
        raise ValidationError("kind", f"{source}: field required")
    values = {**values, "access": access}
    if kind == "faas":
        deployment = build_model(FaasDeployment, values, source)
        if deployment.vcpu_fraction is None:
            deployment = deployment.model_copy(
                update={"vcpu_fraction": vcpu_for_memory(deployment.memory_mb)}
            )
        return deployment
    return build_model(DspDeployment, values, source)


def dump_deployment(deployment: Deployment) -> str:
    """Serialize a descriptor (without its access profile)."""
    data = deployment.model_dump(exclude={"access"})
    return dump_flat(data.items())


def _per_request(access: AccessProfile, rate: Decimal, catalog: PricingCatalog) -> Dict[CostDimension, Decimal]:
    events_per_hour = rate * SECONDS_PER_HOUR
    return {
        CostDimension.DB_READ: events_per_hour * access.db_reads_per_event * catalog.per_db_read,
        CostDimension.DB_WRITE: events_per_hour * access.db_writes_per_event * catalog.per_db_write,
        CostDimension.MESSAGE: events_per_hour * access.messages_per_event * catalog.per_message,
    }


def faas_hourly_cost(deployment: FaasDeployment, rate: Rate, catalog: PricingCatalog) -> HourlyCost:
    """Hourly cost of a function deployment at a constant arrival rate.

    Every event is one invocation billed for its memory-time plus the
    database and transport accesses it causes; there is no fixed part.

    Args:
        deployment: Function shape
        rate: Events per second
        catalog: Unit prices

    Returns:
        Hourly cost by dimension
    """
    rate = _rate(rate)
    invocations = rate * SECONDS_PER_HOUR
    gb_seconds = (Decimal(deployment.memory_mb) / MB_PER_GB) * (deployment.duration_ms / MS_PER_S)
    components = {
        CostDimension.INVOCATION: invocations * catalog.per_invocation,
        CostDimension.COMPUTE_DURATION: invocations * gb_seconds * catalog.per_gb_second,
        **_per_request(deployment.access, rate, catalog),
    }
    return HourlyCost.from_components(components)


def node_count(deployment: DspDeployment, m_star: int) -> int:
    """VMs needed to place m_star taskmanagers next to the fixed components."""
    slots = m_star + deployment.fixed_overhead_slots
    return max(1, math.ceil(slots / deployment.slots_per_node))


def container_hourly_price(deployment: DspDeployment, catalog: PricingCatalog) -> Decimal:
    """Price of one container, charged at least the catalog minimum."""
    vcpu = max(deployment.per_instance_vcpu, catalog.container_min_vcpu)
    gb = max(deployment.per_instance_gb, catalog.container_min_gb)
    return vcpu * catalog.per_container_vcpu_hour + gb * catalog.per_container_gb_hour


def dsp_hourly_cost(
    deployment: DspDeployment,
    rate: Rate,
    catalog: PricingCatalog,
    m_star: int
) -> HourlyCost:
    """Hourly cost of a stream processing deployment running m_star instances.

    self-managed-k8s pays cluster and load balancer fees plus whole VMs;
    serverless-dsp pays one VM per instance and no fees; serverless-k8s pays
    the fees plus one container per instance and per overhead slot.

    Args:
        deployment: Stream processing shape
        rate: Events per second
        catalog: Unit prices
        m_star: Instances from the capacity search

    Returns:
        Hourly cost by dimension

    Raises:
        InvalidCapacity: If m_star < 1
    """
    if m_star < 1:
        raise InvalidCapacity(f"m_star must be at least 1, got {m_star}")
    rate = _rate(rate)
    components = _per_request(deployment.access, rate, catalog)

    if deployment.kind == DspKind.SELF_MANAGED_K8S:
        nodes = node_count(deployment, m_star)
        components[CostDimension.VM] = nodes * catalog.per_vm_hour
        components[CostDimension.CLUSTER_FEE] = catalog.cluster_fee_per_hour
        components[CostDimension.LB_FEE] = catalog.lb_fee_per_hour
    elif deployment.kind == DspKind.SERVERLESS_DSP:
        components[CostDimension.VM] = m_star * catalog.per_vm_hour
    else:
        containers = m_star + deployment.fixed_overhead_slots
        components[CostDimension.CONTAINER] = containers * container_hourly_price(deployment, catalog)
        components[CostDimension.CLUSTER_FEE] = catalog.cluster_fee_per_hour
        components[CostDimension.LB_FEE] = catalog.lb_fee_per_hour

    return HourlyCost.from_components(components)


def hourly_cost(
    deployment: Deployment,
    rate: Rate,
    catalog: PricingCatalog,
    m_star: Optional[int] = None
) -> HourlyCost:
    """Dispatch to the cost model of the deployment's platform."""
    if isinstance(deployment, FaasDeployment):
        return faas_hourly_cost(deployment, rate, catalog)
    if m_star is None:
        raise InvalidCapacity("stream processing costs need an instance count")
    return dsp_hourly_cost(deployment, rate, catalog, m_star)


def cost_shares(cost: HourlyCost) -> Dict[CostDimension, float]:
    """Fraction of the total contributed by each dimension.

    Raises:
        ZeroTotal: If the total is zero
    """
    if cost.total == 0:
        raise ZeroTotal("cost shares are undefined for a zero total")
    return {dim: float(value / cost.total) for dim, value in cost.components.items()}
