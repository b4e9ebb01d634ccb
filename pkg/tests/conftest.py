"""Shared fixtures for the cost benchmark tests."""

from pathlib import Path

import pytest

from costbench.models import PricingCatalog, SloPolicy, SutModel
from costbench.pricing import load_catalog

REPO_ROOT = Path(__file__).resolve().parent.parent
CATALOGS = REPO_ROOT / "catalogs"
SCENARIOS = REPO_ROOT / "scenarios"


def scenario_path(name: str) -> Path:
    return SCENARIOS / f"{name}.env"


@pytest.fixture
def baseline_catalog() -> PricingCatalog:
    return load_catalog(CATALOGS / "gcp-baseline.env")


@pytest.fixture
def autopilot_catalog() -> PricingCatalog:
    return load_catalog(CATALOGS / "gcp-autopilot.env")


@pytest.fixture
def default_policy() -> SloPolicy:
    return SloPolicy()


@pytest.fixture
def noiseless_sut() -> SutModel:
    return SutModel(per_instance_capacity=100)
