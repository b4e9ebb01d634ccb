"""Error types raised by the cost benchmark."""

from decimal import Decimal
from typing import Optional


class CostBenchError(Exception):
    """Base class for every expected failure.

    The exit code is what the CLI returns when the error reaches it.
    """

    exit_code = 2

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def __str__(self) -> str:
        if self.detail:
            return f"{self.message} ({self.detail})"
        return self.message


class ParseError(CostBenchError):
    """A flat key-value file could not be parsed."""


class ValidationError(CostBenchError):
    """A parsed value violates the schema; names the offending field."""

    def __init__(self, field: str, message: str, detail: Optional[str] = None):
        super().__init__(f"{field}: {message}", detail)
        self.field = field


class ScenarioError(CostBenchError):
    """A scenario file references inconsistent or missing inputs."""


class GridMismatch(CostBenchError):
    """Two curves were not sampled on the same load grid."""

    def __init__(self, left: str, right: str, detail: Optional[str] = None):
        super().__init__(f"load grids of '{left}' and '{right}' differ", detail)
        self.left = left
        self.right = right


class EmptyWindow(CostBenchError):
    """Summary statistics were requested for an empty window."""


class InvalidCapacity(CostBenchError):
    """An instance count below one was requested."""


class InsufficientSamples(CostBenchError):
    """Fewer than two lag samples remain after the warmup cut."""


class ZeroTotal(CostBenchError):
    """Cost shares were requested for a cost of zero."""


class NoFeasibleCapacity(CostBenchError):
    """Even the largest admissible instance count violates the SLO."""

    exit_code = 3

    def __init__(self, rate: Decimal, m_max: int):
        super().__init__(f"no instance count up to {m_max} satisfies the SLO at {rate} events/s")
        self.rate = rate
        self.m_max = m_max
