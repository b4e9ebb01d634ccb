"""Deterministic open-workload schedules emulating fixed-interval sensors."""

from decimal import Decimal
from typing import NamedTuple, Optional

import numpy as np
from loguru import logger

from costbench.models import Event, EventSchedule, LoadProfile, to_micros

VALUE_RANGE = (0.0, 1000.0)


class ScheduleSummary(NamedTuple):
    events: int
    sensors: int
    first_us: Optional[int]
    last_us: Optional[int]


def arrival_rate(profile: LoadProfile) -> Decimal:
    """Aggregate arrival rate of a profile.

    Args:
        profile: Load profile

    Returns:
        Events per second, sensors / emit_interval
    """
    return Decimal(profile.sensors) / profile.emit_interval


def sensor_id(index: int, width: int) -> str:
    """Zero padded so lexicographic order equals numeric order."""
    return f"sensor-{index:0{width}d}"


def generate_schedule(profile: LoadProfile) -> EventSchedule:
    """Generate the arrival schedule of a load profile.

    Sensor k emits at phi_k + n * emit_interval inside [0, duration), with
    phi_k drawn uniformly (in whole microseconds) from [0, emit_interval).
    Phases and values come from one generator seeded with profile.seed, so
    equal profiles give identical schedules.

    Args:
        profile: Load profile

    Returns:
        Events sorted by timestamp, ties broken by sensor_id
    """
    duration_us = to_micros(profile.duration)
    if duration_us == 0 or profile.sensors == 0:
        return EventSchedule(events=[])

    interval_us = to_micros(profile.emit_interval)
    rng = np.random.default_rng(profile.seed)
    phases = rng.integers(0, interval_us, size=profile.sensors)
    width = len(str(max(profile.sensors - 1, 0)))

    keyed = []
    for index, phase in enumerate(phases.tolist()):
        name = sensor_id(index, width)
        for timestamp in range(phase, duration_us, interval_us):
            keyed.append((timestamp, name))
    keyed.sort()

    # Values are drawn after ordering so they follow schedule order.
    values = rng.uniform(*VALUE_RANGE, size=len(keyed)).tolist()
    events = [
        Event(sensor_id=name, timestamp_us=timestamp, value=value)
        for (timestamp, name), value in zip(keyed, values)
    ]
    logger.debug(f"Generated {len(events)} events for {profile.sensors} sensors")
    return EventSchedule(events=events)


def schedule_summary(schedule: EventSchedule) -> ScheduleSummary:
    """Count events and sensors and report the covered time span."""
    if not schedule.events:
        return ScheduleSummary(events=0, sensors=0, first_us=None, last_us=None)
    return ScheduleSummary(
        events=len(schedule.events),
        sensors=len({event.sensor_id for event in schedule.events}),
        first_us=schedule.events[0].timestamp_us,
        last_us=schedule.events[-1].timestamp_us,
    )
