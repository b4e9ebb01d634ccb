"""Configuration management for the cost benchmark."""

from decimal import Decimal
from functools import lru_cache
from typing import List

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Logging
    log_level: str = "INFO"

    # Output
    output_dir: str = "./out"

    # Reproducibility
    default_seed: int = 42

    # Load grid in sensors (req/s at the default 1 s emit interval)
    default_grid: str = "1,2,5,10,20,50,100,200,500,1000"

    # SLO defaults
    warmup_s: float = 60.0
    lag_trend_ratio: float = 0.1

    # Capacity search
    sample_interval_s: float = 1.0
    capacity_duration_s: float = 300.0
    m_max: int = 64

    # Sliding window (UC2)
    window_size_s: int = 30
    window_hop_s: int = 3

    class Config:
        env_prefix = "COSTBENCH_"
        env_file = ".env"
        case_sensitive = False


def parse_grid(text: str) -> List[Decimal]:
    """Parse a comma separated list of numbers into Decimals.

    Args:
        text: Comma separated values, e.g. "1,2,5"

    Returns:
        Values in the given order
    """
    return [Decimal(part.strip()) for part in text.split(",") if part.strip()]


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
