"""Simulated system under test, lag-trend SLO check and minimum-instance search."""

import hashlib
import math
from decimal import Decimal
from typing import Dict, List, Sequence, Union

import numpy as np
from loguru import logger

from costbench.exceptions import InsufficientSamples, InvalidCapacity, NoFeasibleCapacity
from costbench.models import CapacityResult, LagSeries, ProbeRecord, SloPolicy, SloVerdict, SutModel

Rate = Union[Decimal, int, float]


def probe_seed(seed: int, rate: Rate, m: int) -> int:
    """Seed of one (rate, m) probe, independent of probe order."""
    digest = hashlib.blake2b(f"{seed}:{Decimal(str(rate)).normalize()}:{m}".encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def simulate_lag(
    rate: Rate,
    m: int,
    sut: SutModel,
    duration_s: float,
    seed: int
) -> LagSeries:
    """Consumer lag of m instances under a constant arrival rate.

    lag(t + dt) = max(0, lag(t) + dt * (rate - m * c) + noise), lag(0) = 0,
    with noise uniform in [-noise_amplitude, noise_amplitude].

    Args:
        rate: Events per second
        m: Instances
        sut: Capacity and sampling parameters
        duration_s: Simulated seconds
        seed: Seed for the noise generator

    Returns:
        Samples at 0, dt, 2 dt, ... up to duration_s

    Raises:
        InvalidCapacity: If m < 1
    """
    if m < 1:
        raise InvalidCapacity(f"instance count must be at least 1, got {m}")
    step = sut.sample_interval_s
    if duration_s < step:
        raise ValueError(f"duration_s ({duration_s}) must cover one sample interval ({step})")

    samples = int(math.floor(duration_s / step + 1e-9))
    drift = step * (float(rate) - m * sut.per_instance_capacity)
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-sut.noise_amplitude, sut.noise_amplitude, size=samples)

    lags = [0.0]
    lag = 0.0
    for eta in noise.tolist():
        lag = max(0.0, lag + drift + eta)
        lags.append(lag)
    times = [k * step for k in range(samples + 1)]
    return LagSeries(times=times, lags=lags)


def lag_trend(times: Sequence[float], lags: Sequence[float]) -> float:
    """Ordinary least-squares slope of lag over time."""
    slope, _ = np.polyfit(np.asarray(times, dtype=float), np.asarray(lags, dtype=float), 1)
    return float(slope)


def slo_check(series: LagSeries, policy: SloPolicy, rate: Rate = 0.0) -> SloVerdict:
    """Check that the lag does not grow faster than the policy allows.

    Samples before the warmup are ignored. Without an absolute threshold the
    policy's ratio is applied to the given rate.

    Args:
        series: Lag samples
        policy: Threshold and warmup
        rate: Arrival rate the series was produced under

    Returns:
        Verdict with the fitted slope

    Raises:
        InsufficientSamples: If fewer than two samples remain after warmup
    """
    kept = [(t, lag) for t, lag in zip(series.times, series.lags) if t >= policy.warmup_s]
    if len(kept) < 2:
        raise InsufficientSamples(
            f"{len(kept)} sample(s) after a {policy.warmup_s}s warmup, need at least 2"
        )
    times, lags = zip(*kept)
    slope = lag_trend(times, lags)
    threshold = policy.threshold(float(rate))
    return SloVerdict(passed=slope <= threshold, slope=slope, threshold=threshold)


class CapacitySearch:
    """Minimum-instance search for one SUT and SLO policy."""

    def __init__(
        self,
        sut: SutModel,
        policy: SloPolicy,
        m_max: int,
        duration_s: float,
        seed: int
    ):
        if m_max < 1:
            raise InvalidCapacity(f"m_max must be at least 1, got {m_max}")
        self.sut = sut
        self.policy = policy
        self.m_max = m_max
        self.duration_s = duration_s
        self.seed = seed

    def probe(self, rate: Rate, m: int) -> ProbeRecord:
        """Simulate m instances at a rate and check the SLO."""
        series = simulate_lag(rate, m, self.sut, self.duration_s, probe_seed(self.seed, rate, m))
        verdict = slo_check(series, self.policy, rate)
        logger.debug(f"rate={rate} m={m} slope={verdict.slope:.6g} passed={verdict.passed}")
        return ProbeRecord(m=m, slope=verdict.slope, passed=verdict.passed)

    def find_min_instances(self, rate: Rate) -> CapacityResult:
        """Smallest instance count in [1, m_max] whose lag passes the SLO.

        Starts at ceil(rate / c) and walks down while the SLO holds, or up
        until it holds; feasibility is monotone in m.

        Raises:
            NoFeasibleCapacity: If m_max fails
        """
        rate = rate if isinstance(rate, Decimal) else Decimal(str(rate))
        probes: Dict[int, ProbeRecord] = {}

        def passes(m: int) -> bool:
            if m not in probes:
                probes[m] = self.probe(rate, m)
            return probes[m].passed

        start = math.ceil(float(rate) / self.sut.per_instance_capacity)
        m = min(max(start, 1), self.m_max)
        if passes(m):
            while m > 1 and passes(m - 1):
                m -= 1
        else:
            while True:
                if m >= self.m_max:
                    raise NoFeasibleCapacity(rate, self.m_max)
                m += 1
                if passes(m):
                    break

        ordered = [probes[k] for k in sorted(probes)]
        logger.debug(f"rate={rate}: m*={m} after {len(ordered)} probes")
        return CapacityResult(rate=rate, m_star=m, probes=ordered)


def find_min_instances(
    rate: Rate,
    sut: SutModel,
    policy: SloPolicy,
    m_max: int,
    duration_s: float,
    seed: int
) -> CapacityResult:
    """Smallest SLO-satisfying instance count for one load level."""
    return CapacitySearch(sut, policy, m_max, duration_s, seed).find_min_instances(rate)


def capacity_profile(
    loads: List[Rate],
    sut: SutModel,
    policy: SloPolicy,
    m_max: int,
    duration_s: float,
    seed: int
) -> Dict[Decimal, CapacityResult]:
    """Run the capacity search for every load level.

    Args:
        loads: Non-empty, sorted arrival rates

    Returns:
        Rate mapped to its capacity result, in load order

    Raises:
        NoFeasibleCapacity: For the first infeasible rate
    """
    if not loads:
        raise ValueError("loads must not be empty")
    search = CapacitySearch(sut, policy, m_max, duration_s, seed)
    results: Dict[Decimal, CapacityResult] = {}
    for rate in loads:
        result = search.find_min_instances(rate)
        results[result.rate] = result
    logger.info(
        f"Capacity profile over {len(loads)} loads: "
        + ", ".join(f"{rate}->{result.m_star}" for rate, result in results.items())
    )
    return results


def m_star_map(results: Dict[Decimal, CapacityResult]) -> Dict[Decimal, int]:
    """Reduce capacity results to rate -> m_star."""
    return {rate: result.m_star for rate, result in results.items()}
