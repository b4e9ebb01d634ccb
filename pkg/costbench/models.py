"""Pydantic models for every domain type of the cost benchmark."""

from decimal import Decimal
from enum import Enum
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MICROS = 1_000_000


def to_micros(seconds: Union[int, float, str, Decimal]) -> int:
    """Convert seconds to integer microseconds.

    Args:
        seconds: Time in seconds; floats go through their shortest repr

    Returns:
        Microseconds, truncated toward zero
    """
    return int(Decimal(str(seconds)) * MICROS)


def format_seconds(micros: int) -> str:
    """Render microseconds as plain decimal seconds ("100", "0.25", "-27")."""
    return format(Decimal(micros) / MICROS, "f")


class UseCase(str, Enum):
    """Reference workflows."""

    UC1 = "uc1"
    UC2 = "uc2"


class Platform(str, Enum):
    """Execution paradigm of a deployment."""

    FAAS = "faas"
    DSP = "dsp"


class DspKind(str, Enum):
    """How a stream processing deployment is operated and billed."""

    SELF_MANAGED_K8S = "self-managed-k8s"
    SERVERLESS_DSP = "serverless-dsp"
    SERVERLESS_K8S = "serverless-k8s"


class CostDimension(str, Enum):
    """Billing dimensions of an hourly cost."""

    INVOCATION = "invocation"
    COMPUTE_DURATION = "compute_duration"
    DB_READ = "db_read"
    DB_WRITE = "db_write"
    MESSAGE = "message"
    VM = "vm"
    CLUSTER_FEE = "cluster_fee"
    LB_FEE = "lb_fee"
    CONTAINER = "container"


# ---------------------------------------------------------------------------
# workload
# ---------------------------------------------------------------------------


class LoadProfile(BaseModel):
    """Open-workload description: fixed-interval sensors."""

    model_config = ConfigDict(frozen=True)

    sensors: int = Field(..., description="Number of emulated sensors", ge=0)
    emit_interval: Decimal = Field(
        Decimal("1"),
        description="Seconds between two readings of one sensor",
        gt=0
    )
    duration: Decimal = Field(Decimal("0"), description="Schedule length in seconds", ge=0)
    seed: int = Field(0, description="Seed for phases and payload values", ge=0, lt=2**64)


class Event(BaseModel):
    """A timestamped, keyed sensor reading."""

    model_config = ConfigDict(frozen=True)

    sensor_id: str = Field(..., description="Sensor key", min_length=1)
    timestamp_us: int = Field(..., description="Microseconds since schedule epoch", ge=0)
    value: float = Field(..., description="Sensor reading")

    @classmethod
    def at(cls, sensor_id: str, seconds: Union[int, float, str, Decimal], value: float) -> "Event":
        """Build an event from a timestamp in seconds."""
        return cls(sensor_id=sensor_id, timestamp_us=to_micros(seconds), value=value)


class EventSchedule(BaseModel):
    """Events ordered by (timestamp, sensor_id)."""

    model_config = ConfigDict(frozen=True)

    events: List[Event] = Field(default_factory=list)

    @field_validator("events")
    @classmethod
    def _check_order(cls, events: List[Event]) -> List[Event]:
        for before, after in zip(events, events[1:]):
            if (before.timestamp_us, before.sensor_id) > (after.timestamp_us, after.sensor_id):
                raise ValueError("events must be sorted by timestamp, then sensor_id")
        return events

    def __len__(self) -> int:
        return len(self.events)


# ---------------------------------------------------------------------------
# usecase
# ---------------------------------------------------------------------------


class WindowSpec(BaseModel):
    """Hopping window: size W advancing every hop h."""

    model_config = ConfigDict(frozen=True)

    size_s: Decimal = Field(Decimal("30"), description="Window size W in seconds", gt=0)
    hop_s: Decimal = Field(Decimal("3"), description="Window hop h in seconds", gt=0)

    @model_validator(mode="after")
    def _check_multiple(self) -> "WindowSpec":
        if self.hop_s > self.size_s:
            raise ValueError("hop_s must not exceed size_s")
        if self.size_s % self.hop_s != 0:
            raise ValueError("size_s must be an integer multiple of hop_s")
        return self

    @property
    def size_us(self) -> int:
        return to_micros(self.size_s)

    @property
    def hop_us(self) -> int:
        return to_micros(self.hop_s)

    @property
    def windows_per_event(self) -> int:
        return int(self.size_s / self.hop_s)


class StoreRecord(BaseModel):
    """An event mapped to the database format."""

    model_config = ConfigDict(frozen=True)

    key: str = Field(..., description="sensor_id#timestamp")
    value: float
    write_units: int = Field(1, ge=1)


class WindowStats(BaseModel):
    """Summary statistics of one window."""

    model_config = ConfigDict(frozen=True)

    count: int = Field(..., ge=1)
    sum: float
    min: float
    max: float
    mean: float


class Aggregate(BaseModel):
    """Summary statistics for one (key, window)."""

    model_config = ConfigDict(frozen=True)

    key: str
    window_start_us: int
    count: int = Field(..., ge=1)
    sum: float
    min: float
    max: float
    mean: float

    @classmethod
    def from_stats(cls, key: str, window_start_us: int, stats: WindowStats) -> "Aggregate":
        return cls(key=key, window_start_us=window_start_us, **stats.model_dump())

    def csv_row(self) -> List[str]:
        """Row for the aggregates CSV (key, window_start, count, sum, min, max, mean)."""
        return [
            self.key,
            format_seconds(self.window_start_us),
            str(self.count),
            repr(self.sum),
            repr(self.min),
            repr(self.max),
            repr(self.mean),
        ]


class AccessProfile(BaseModel):
    """Resource accesses caused by one event."""

    model_config = ConfigDict(frozen=True)

    db_reads_per_event: int = Field(0, ge=0)
    db_writes_per_event: int = Field(0, ge=0)
    messages_per_event: int = Field(0, ge=0)


# ---------------------------------------------------------------------------
# pricing
# ---------------------------------------------------------------------------

PRICE_FIELDS = (
    "per_invocation",
    "per_gb_second",
    "per_db_read",
    "per_db_write",
    "per_message",
    "per_vm_hour",
    "cluster_fee_per_hour",
    "lb_fee_per_hour",
    "per_container_vcpu_hour",
    "per_container_gb_hour",
    "container_min_vcpu",
    "container_min_gb",
)


class PricingCatalog(BaseModel):
    """Unit prices for one provider / deployment flavor, in USD."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    label: str = Field(..., description="Catalog name", min_length=1)
    source: Optional[str] = Field(None, description="Where the prices were taken from")

    per_invocation: Decimal = Field(..., ge=0, description="USD per function invocation")
    per_gb_second: Decimal = Field(..., ge=0, description="USD per GB-second of function memory-time")
    per_db_read: Decimal = Field(..., ge=0, description="USD per database read")
    per_db_write: Decimal = Field(..., ge=0, description="USD per database write")
    per_message: Decimal = Field(Decimal("0"), ge=0, description="USD per transported message")
    per_vm_hour: Decimal = Field(..., ge=0, description="USD per VM hour")
    cluster_fee_per_hour: Decimal = Field(Decimal("0"), ge=0)
    lb_fee_per_hour: Decimal = Field(Decimal("0"), ge=0)
    per_container_vcpu_hour: Decimal = Field(Decimal("0"), ge=0)
    per_container_gb_hour: Decimal = Field(Decimal("0"), ge=0)
    container_min_vcpu: Decimal = Field(Decimal("0.25"), ge=0)
    container_min_gb: Decimal = Field(Decimal("0.5"), ge=0)


# ---------------------------------------------------------------------------
# deployment
# ---------------------------------------------------------------------------


class FaasDeployment(BaseModel):
    """Function deployment shape."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["faas"] = "faas"
    label: str = Field(..., min_length=1)
    memory_mb: int = Field(..., gt=0, description="Function memory in MB")
    vcpu_fraction: Optional[Decimal] = Field(
        None,
        description="vCPU share granted for the memory size; derived when omitted",
        gt=0
    )
    duration_ms: Decimal = Field(..., gt=0, description="Billed duration per invocation")
    access: AccessProfile = Field(default_factory=AccessProfile)


class DspDeployment(BaseModel):
    """Stream processing deployment shape."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DspKind
    label: str = Field(..., min_length=1)
    slots_per_node: int = Field(4, ge=1, description="Taskmanager slots per VM")
    fixed_overhead_slots: int = Field(
        3,
        ge=0,
        description="Slots taken by coordinator, brokers and monitoring"
    )
    per_instance_vcpu: Decimal = Field(Decimal("1"), ge=0)
    per_instance_gb: Decimal = Field(Decimal("4"), ge=0)
    # Metadata only; these size fixed_overhead_slots and are never simulated.
    checkpoint_interval_s: int = Field(30, ge=0)
    broker_replication: int = Field(3, ge=1)
    access: AccessProfile = Field(default_factory=AccessProfile)


Deployment = Union[FaasDeployment, DspDeployment]


class HourlyCost(BaseModel):
    """Steady-state cost per hour, split by billing dimension."""

    model_config = ConfigDict(frozen=True)

    total: Decimal
    components: Dict[CostDimension, Decimal]

    @classmethod
    def from_components(cls, components: Dict[CostDimension, Decimal]) -> "HourlyCost":
        """Build a cost whose total is the sum of all (zero-filled) components."""
        filled = {dim: Decimal(components.get(dim, Decimal("0"))) for dim in CostDimension}
        return cls(total=sum(filled.values(), Decimal("0")), components=filled)

    @model_validator(mode="after")
    def _check_total(self) -> "HourlyCost":
        if self.total != sum(self.components.values(), Decimal("0")):
            raise ValueError("total must equal the sum of components")
        return self

    def component(self, dimension: CostDimension) -> Decimal:
        return self.components.get(dimension, Decimal("0"))


# ---------------------------------------------------------------------------
# capacity
# ---------------------------------------------------------------------------


class SutModel(BaseModel):
    """Simulated system under test with linear per-instance capacity."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    per_instance_capacity: float = Field(..., gt=0, description="Events/s one instance processes")
    warmup_s: float = Field(60.0, ge=0)
    noise_amplitude: float = Field(0.0, ge=0, description="Uniform additive lag noise per sample")
    sample_interval_s: float = Field(1.0, gt=0)


class LagSeries(BaseModel):
    """Consumer lag samples."""

    model_config = ConfigDict(frozen=True)

    times: List[float]
    lags: List[float]

    @model_validator(mode="after")
    def _check_samples(self) -> "LagSeries":
        if len(self.times) != len(self.lags):
            raise ValueError("times and lags must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("times must be strictly increasing")
        if any(lag < 0 for lag in self.lags):
            raise ValueError("lag must be non-negative")
        return self


class SloPolicy(BaseModel):
    """Admissible lag trend.

    When max_lag_trend is unset the threshold scales with the load:
    lag_trend_ratio * rate.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    max_lag_trend: Optional[float] = Field(None, ge=0, description="Max OLS slope in events/s")
    lag_trend_ratio: float = Field(0.1, ge=0)
    warmup_s: float = Field(60.0, ge=0)

    def threshold(self, rate: float = 0.0) -> float:
        if self.max_lag_trend is not None:
            return self.max_lag_trend
        return self.lag_trend_ratio * rate


class SloVerdict(BaseModel):
    """Outcome of a lag-trend check."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    slope: float
    threshold: float


class ProbeRecord(BaseModel):
    """One probed instance count during capacity search."""

    model_config = ConfigDict(frozen=True)

    m: int
    slope: float
    passed: bool


class CapacityResult(BaseModel):
    """Minimum instances for one load level plus the probes behind it."""

    model_config = ConfigDict(frozen=True)

    rate: Decimal
    m_star: int = Field(..., ge=1)
    probes: List[ProbeRecord] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------


class CostPoint(BaseModel):
    """Hourly cost at one load level."""

    model_config = ConfigDict(frozen=True)

    rate: Decimal
    cost: HourlyCost
    capacity: Optional[CapacityResult] = None


class CostCurve(BaseModel):
    """Hourly cost of one deployment over a load grid."""

    model_config = ConfigDict(frozen=True)

    label: str
    points: List[CostPoint]

    @field_validator("points")
    @classmethod
    def _check_rates(cls, points: List[CostPoint]) -> List[CostPoint]:
        if any(b.rate <= a.rate for a, b in zip(points, points[1:])):
            raise ValueError("rates must be strictly increasing")
        return points

    @property
    def rates(self) -> List[Decimal]:
        return [point.rate for point in self.points]


class BreakEven(BaseModel):
    """Load at which the step-cost deployment becomes no more expensive."""

    model_config = ConfigDict(frozen=True)

    rate: Optional[Decimal] = Field(None, description="Interpolated break-even load")
    lower: Optional[Decimal] = Field(None, description="Last sampled load where FaaS is cheaper")
    upper: Optional[Decimal] = Field(None, description="First sampled load where DSP is no worse")


class BreakEvenEntry(BaseModel):
    faas: str
    dsp: str
    break_even: BreakEven


class CatalogDifference(BaseModel):
    field: str
    a_value: Optional[str]
    b_value: Optional[str]


class CatalogDiffEntry(BaseModel):
    a: str
    b: str
    differences: List[CatalogDifference]


class Report(BaseModel):
    """Comparison of several scenarios."""

    scenarios: List[str]
    tie_rule: str
    curves: List[CostCurve]
    break_evens: List[BreakEvenEntry]
    shares: Dict[str, Dict[str, float]] = Field(
        ...,
        description="Per-dimension share of the cost summed over the grid"
    )
    per_million_requests: Dict[str, Dict[str, Decimal]] = Field(
        ...,
        description="Average USD per 1,000,000 requests by dimension"
    )
    relative_deltas: Dict[str, float] = Field(
        ...,
        description="Mean relative cost difference against the first scenario"
    )
    catalog_diffs: List[CatalogDiffEntry]
