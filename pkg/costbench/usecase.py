"""Reference executors for the stateless (UC1) and stateful (UC2) workflows.

Both executors count the store reads, writes and consumed messages they
issue, so a small run yields the per-event access profile that the cost
models extrapolate linearly.
"""

from typing import Any, Dict, Iterator, List, Optional, Protocol, Set, Tuple

from loguru import logger

from costbench.exceptions import EmptyWindow
from costbench.models import (
    AccessProfile,
    Aggregate,
    Event,
    EventSchedule,
    Platform,
    StoreRecord,
    UseCase,
    WindowSpec,
    WindowStats,
    format_seconds,
)


class KeyValueStore(Protocol):
    """Write sink contract; only per-call atomicity is required."""

    def get(self, key: str) -> Optional[Any]:
        ...

    def put(self, key: str, value: Any) -> None:
        ...


class InMemoryStore:
    """Dictionary backed store counting billable operations."""

    def __init__(self):
        self._data: Dict[str, Any] = {}
        self.reads = 0
        self.writes = 0

    def get(self, key: str) -> Optional[Any]:
        self.reads += 1
        return self._data.get(key)

    def put(self, key: str, value: Any) -> None:
        self.writes += 1
        self._data[key] = value

    def snapshot(self, key: str) -> Optional[Any]:
        """Read without counting (harness-side readout, never billed)."""
        return self._data.get(key)

    def items(self) -> Iterator[Tuple[str, Any]]:
        for key in sorted(self._data):
            yield key, self._data[key]

    def __len__(self) -> int:
        return len(self._data)


def transform(event: Event) -> StoreRecord:
    """Map an event to the database record format.

    Args:
        event: Sensor reading

    Returns:
        Record keyed by sensor and timestamp
    """
    return StoreRecord(
        key=f"{event.sensor_id}#{format_seconds(event.timestamp_us)}",
        value=event.value,
        write_units=1
    )


def windows_for(timestamp_us: int, spec: WindowSpec) -> List[int]:
    """Start times of every hopping window containing a timestamp.

    Windows are aligned to epoch 0; starts before the epoch are allowed.

    Args:
        timestamp_us: Event time in microseconds
        spec: Window size and hop

    Returns:
        Ascending window starts in microseconds, size/hop of them
    """
    hop, size = spec.hop_us, spec.size_us
    last = timestamp_us - timestamp_us % hop
    return list(range(last - size + hop, last + 1, hop))


class _Accumulator:
    """Running count/sum/min/max; the first value seeds every statistic."""

    __slots__ = ("count", "sum", "min", "max")

    def __init__(self, value: float):
        self.count = 1
        self.sum = value
        self.min = value
        self.max = value

    def add(self, value: float) -> None:
        self.count += 1
        self.sum += value
        if value < self.min:
            self.min = value
        if value > self.max:
            self.max = value

    def stats(self) -> WindowStats:
        return WindowStats(
            count=self.count,
            sum=self.sum,
            min=self.min,
            max=self.max,
            mean=self.sum / self.count
        )

    def to_document(self) -> Dict[str, Any]:
        return {"count": self.count, "sum": self.sum, "min": self.min, "max": self.max}

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "_Accumulator":
        acc = cls(document["min"])
        acc.count = document["count"]
        acc.sum = document["sum"]
        acc.max = document["max"]
        return acc


def aggregate(values: List[float]) -> WindowStats:
    """Summary statistics of a window's values.

    Args:
        values: Values in arrival order

    Returns:
        count, sum, min, max and mean

    Raises:
        EmptyWindow: If values is empty
    """
    if not values:
        raise EmptyWindow("cannot aggregate an empty window")
    acc = _Accumulator(values[0])
    for value in values[1:]:
        acc.add(value)
    return acc.stats()


def access_profile(
    use_case: UseCase,
    platform: Platform,
    spec: Optional[WindowSpec] = None
) -> AccessProfile:
    """Canonical per-event resource accesses of a use case on a platform.

    UC1 writes one record per event on both platforms. UC2 on FaaS keeps one
    document per window and reads then writes each of the size/hop windows
    an event belongs to; on DSP all window state is local.
    """
    if use_case == UseCase.UC1:
        return AccessProfile(db_reads_per_event=0, db_writes_per_event=1, messages_per_event=1)
    if platform == Platform.DSP:
        return AccessProfile(db_reads_per_event=0, db_writes_per_event=0, messages_per_event=1)
    windows = (spec or WindowSpec()).windows_per_event
    return AccessProfile(
        db_reads_per_event=windows,
        db_writes_per_event=windows,
        messages_per_event=1
    )


def _per_event(reads: int, writes: int, messages: int, events: int) -> AccessProfile:
    for total in (reads, writes, messages):
        if total % events:
            raise ValueError(f"{total} accesses do not divide evenly over {events} events")
    return AccessProfile(
        db_reads_per_event=reads // events,
        db_writes_per_event=writes // events,
        messages_per_event=messages // events
    )


def run_uc1(schedule: EventSchedule, store: KeyValueStore) -> Tuple[int, AccessProfile]:
    """Transform every event and persist it.

    Args:
        schedule: Events to process
        store: Sink receiving one record per event, in schedule order

    Returns:
        Records written and the measured per-event access profile
    """
    written = 0
    for event in schedule.events:
        record = transform(event)
        store.put(record.key, record.value)
        written += record.write_units

    if not schedule.events:
        logger.warning("UC1 ran on an empty schedule")
        return 0, access_profile(UseCase.UC1, Platform.FAAS)

    events = len(schedule.events)
    logger.info(f"UC1 persisted {written} records")
    return written, _per_event(0, written, events, events)


class _LocalWindowState:
    """Keyed operator state held in memory (stream processor)."""

    def __init__(self):
        self._windows: Dict[Tuple[str, int], _Accumulator] = {}
        self.reads = 0
        self.writes = 0

    def update(self, key: str, start: int, value: float) -> None:
        acc = self._windows.get((key, start))
        if acc is None:
            self._windows[(key, start)] = _Accumulator(value)
        else:
            acc.add(value)

    def close(self, key: str, start: int) -> WindowStats:
        return self._windows.pop((key, start)).stats()


class _StoreWindowState:
    """One store document per (key, window), updated read-modify-write (function).

    Documents written by an earlier run on the same store are replaced, not merged.
    """

    def __init__(self, store: KeyValueStore):
        self.store = store
        self.reads = 0
        self.writes = 0
        self._latest: Dict[Tuple[str, int], _Accumulator] = {}

    @staticmethod
    def document_key(key: str, start: int) -> str:
        return f"{key}#window#{format_seconds(start)}"

    def update(self, key: str, start: int, value: float) -> None:
        doc_key = self.document_key(key, start)
        document = self.store.get(doc_key)
        self.reads += 1
        # A document this run has not opened yet is stale and gets overwritten.
        if document is None or (key, start) not in self._latest:
            acc = _Accumulator(value)
        else:
            acc = _Accumulator.from_document(document)
            acc.add(value)
        self.store.put(doc_key, acc.to_document())
        self.writes += 1
        # Each invocation logs the window's current aggregate; the last one wins.
        self._latest[(key, start)] = acc

    def close(self, key: str, start: int) -> WindowStats:
        return self._latest.pop((key, start)).stats()


def run_uc2(
    schedule: EventSchedule,
    spec: WindowSpec,
    platform: Platform,
    store: Optional[KeyValueStore] = None
) -> Tuple[List[Aggregate], AccessProfile]:
    """Hopping-window aggregation per sensor key.

    A window [s, s + size) is emitted once the watermark (maximum observed
    timestamp) reaches s + size; the end of input closes all remaining
    windows. Windows without events are never emitted.

    Args:
        schedule: Events in timestamp order
        spec: Window size and hop
        platform: FAAS keeps window state in the store, DSP keeps it locally
        store: Store for FAAS window documents (a fresh InMemoryStore if omitted)

    Returns:
        Aggregates in emission order and the measured per-event access profile
    """
    if platform == Platform.FAAS:
        state = _StoreWindowState(store if store is not None else InMemoryStore())
    else:
        state = _LocalWindowState()

    open_windows: Dict[int, Set[str]] = {}
    aggregates: List[Aggregate] = []

    def emit_until(watermark: Optional[int]) -> None:
        for start in sorted(open_windows):
            if watermark is not None and start + spec.size_us > watermark:
                break
            for key in sorted(open_windows.pop(start)):
                aggregates.append(Aggregate.from_stats(key, start, state.close(key, start)))

    for event in schedule.events:
        emit_until(event.timestamp_us)
        for start in windows_for(event.timestamp_us, spec):
            state.update(event.sensor_id, start, event.value)
            open_windows.setdefault(start, set()).add(event.sensor_id)
    emit_until(None)

    if not schedule.events:
        logger.warning("UC2 ran on an empty schedule")
        return aggregates, access_profile(UseCase.UC2, platform, spec)

    events = len(schedule.events)
    logger.info(f"UC2 ({platform.value}) emitted {len(aggregates)} aggregates from {events} events")
    return aggregates, _per_event(state.reads, state.writes, events, events)
