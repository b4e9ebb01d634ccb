"""Scenario files: one deployment on one catalog over one load grid."""

from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from costbench.config import Settings, get_settings, parse_grid
from costbench.deployment import load_deployment
from costbench.exceptions import ParseError, ScenarioError
from costbench.flatfile import build_model, read_flat
from costbench.models import (
    DspDeployment,
    FaasDeployment,
    LoadProfile,
    Platform,
    PricingCatalog,
    SloPolicy,
    SutModel,
    UseCase,
    WindowSpec,
)
from costbench.pricing import load_catalog
from costbench.usecase import access_profile
from costbench.workload import arrival_rate

_PATH_KEYS = ("catalog", "deployment", "sut", "slo")


class ScenarioFile(BaseModel):
    """Raw scenario file contents; paths are relative to the file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    label: str = Field(..., min_length=1)
    use_case: UseCase
    platform: Platform
    catalog: str
    deployment: str
    sut: Optional[str] = None
    slo: Optional[str] = None
    grid: Optional[str] = Field(None, description="Comma separated sensor counts")
    emit_interval: Decimal = Field(Decimal("1"), gt=0)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    window_size_s: Optional[Decimal] = None
    window_hop_s: Optional[Decimal] = None
    duration_s: Optional[float] = Field(None, gt=0, description="Simulated seconds per capacity probe")
    m_max: Optional[int] = Field(None, ge=1)


class Scenario(BaseModel):
    """A scenario with every referenced file loaded."""

    model_config = ConfigDict(frozen=True)

    label: str
    path: str
    use_case: UseCase
    platform: Platform
    catalog: PricingCatalog
    deployment: Union[FaasDeployment, DspDeployment]
    sut: Optional[SutModel] = None
    policy: Optional[SloPolicy] = None
    sensors: List[Decimal]
    emit_interval: Decimal
    seed: int
    window: WindowSpec
    duration_s: float
    m_max: int
    sources: Dict[str, str] = Field(default_factory=dict)

    @property
    def loads(self) -> List[Decimal]:
        """Arrival rates of the grid."""
        return [
            arrival_rate(LoadProfile(sensors=int(count), emit_interval=self.emit_interval))
            for count in self.sensors
        ]


def load_sut(path: Union[str, Path], settings: Optional[Settings] = None) -> SutModel:
    """Load a SUT model; warmup and sampling default to the settings."""
    settings = settings or get_settings()
    values = {
        "warmup_s": settings.warmup_s,
        "sample_interval_s": settings.sample_interval_s,
        **read_flat(path),
    }
    return build_model(SutModel, values, str(path))


def load_slo(
    path: Union[str, Path],
    settings: Optional[Settings] = None,
    warmup_s: Optional[float] = None
) -> SloPolicy:
    """Load an SLO policy.

    A policy without its own warmup inherits the SUT's (or the settings') warmup.
    """
    settings = settings or get_settings()
    values = {
        "lag_trend_ratio": settings.lag_trend_ratio,
        "warmup_s": warmup_s if warmup_s is not None else settings.warmup_s,
        **read_flat(path),
    }
    return build_model(SloPolicy, values, str(path))


def load_scenario(
    path: Union[str, Path],
    seed: Optional[int] = None,
    grid: Optional[str] = None,
    settings: Optional[Settings] = None
) -> Scenario:
    """Load a scenario and everything it references.

    Args:
        path: Scenario file
        seed: Overrides the file's seed
        grid: Overrides the file's grid (comma separated sensor counts)
        settings: Defaults for values the file leaves out

    Returns:
        Fully resolved scenario

    Raises:
        ScenarioError: If DSP/FaaS references are inconsistent or the grid is invalid
    """
    settings = settings or get_settings()
    path = Path(path)
    values: Dict[str, object] = dict(read_flat(path))
    if seed is not None:
        values["seed"] = seed
    raw = build_model(ScenarioFile, values, str(path))

    if raw.platform == Platform.DSP and (raw.sut is None or raw.slo is None):
        raise ScenarioError(f"{path}: dsp scenarios must reference a sut and an slo file")
    if raw.platform == Platform.FAAS and (raw.sut is not None or raw.slo is not None):
        raise ScenarioError(f"{path}: faas scenarios must not reference sut or slo files")

    base = path.parent
    sources = {key: str(base / getattr(raw, key)) for key in _PATH_KEYS if getattr(raw, key)}

    window = build_model(
        WindowSpec,
        {
            "size_s": raw.window_size_s if raw.window_size_s is not None else Decimal(settings.window_size_s),
            "hop_s": raw.window_hop_s if raw.window_hop_s is not None else Decimal(settings.window_hop_s),
        },
        str(path),
    )
    access = access_profile(raw.use_case, raw.platform, window)
    deployment = load_deployment(sources["deployment"], access)
    if isinstance(deployment, FaasDeployment) != (raw.platform == Platform.FAAS):
        raise ScenarioError(f"{path}: deployment kind does not match platform '{raw.platform.value}'")

    try:
        sensors = parse_grid(grid or raw.grid or settings.default_grid)
    except ArithmeticError as exc:
        raise ParseError(f"{path}: grid is not a comma separated list of numbers") from exc
    if not sensors:
        raise ScenarioError(f"{path}: grid is empty")
    if any(count < 0 or count != count.to_integral_value() for count in sensors):
        raise ScenarioError(f"{path}: grid entries must be non-negative sensor counts")
    if any(b <= a for a, b in zip(sensors, sensors[1:])):
        raise ScenarioError(f"{path}: grid must be strictly increasing")

    sut = load_sut(sources["sut"], settings) if "sut" in sources else None
    policy = (
        load_slo(sources["slo"], settings, sut.warmup_s if sut else None) if "slo" in sources else None
    )

    scenario = Scenario(
        label=raw.label,
        path=str(path),
        use_case=raw.use_case,
        platform=raw.platform,
        catalog=load_catalog(sources["catalog"]),
        deployment=deployment,
        sut=sut,
        policy=policy,
        sensors=sensors,
        emit_interval=raw.emit_interval,
        seed=raw.seed if raw.seed is not None else settings.default_seed,
        window=window,
        duration_s=raw.duration_s or settings.capacity_duration_s,
        m_max=raw.m_max or settings.m_max,
        sources=sources,
    )
    logger.info(f"Loaded scenario '{scenario.label}' ({len(sensors)} grid points) from {path}")
    return scenario


def file_kind(values: Dict[str, str]) -> str:
    """Guess what a flat file describes from its keys."""
    if "use_case" in values or "platform" in values:
        return "scenario"
    if "per_invocation" in values or "per_vm_hour" in values:
        return "catalog"
    if "kind" in values:
        return "deployment"
    if "per_instance_capacity" in values:
        return "sut"
    return "slo"


def validate_file(path: Union[str, Path]) -> str:
    """Load a fixture file of any kind, raising on the first problem.

    Scenarios are loaded together with every file they reference.

    Returns:
        The detected kind
    """
    values = read_flat(path)
    kind = file_kind(values)
    if kind == "scenario":
        load_scenario(path)
    elif kind == "catalog":
        load_catalog(path)
    elif kind == "deployment":
        load_deployment(path)
    elif kind == "sut":
        load_sut(path)
    else:
        load_slo(path)
    return kind
