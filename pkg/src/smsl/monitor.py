"""Simulated sensor network and state estimation.

One sensor observes one fact. Readings flow into a store that keeps the
latest value per sensor regardless of arrival order; aggregation turns
the stored readings into a scene snapshot, marks facts whose readings
are older than the staleness limit as unknown, and identifies the state.
Identification is fail-closed, so a single stale or missing fact makes
the whole estimate Unknown.

Drift detection compares consecutive estimates: a state change with no
dispatched operation, or with a dispatched operation whose target is a
different state, raises an alarm.

Everything here is simulated and deterministic. A SimulatedWorld holds
ground-truth fact values, sampling copies them into readings, and replay
files (one ``<sensor_id> <value> <timestamp>`` line each) inject
scripted readings at scripted times.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

from .document import StateBranch
from .errors import (
    BranchMismatchError,
    IncompleteMapError,
    NotDecodableError,
    UnknownSensorError,
)
from .graph import Edge, EdgeId
from .statecheck import (
    SceneSnapshot,
    decode_state_name,
    effective_fact_count,
    identify_state,
)

__all__ = [
    "SensorReading",
    "SensorMap",
    "StateEstimate",
    "Alarm",
    "SensorStore",
    "aggregate",
    "detect_unplanned_transition",
    "SimulatedWorld",
    "sample_world",
    "load_replay",
    "parse_replay",
    "SimClock",
    "MonitorContext",
    "default_sensor_map",
]

DEFAULT_STALENESS_LIMIT = 5.0

UNPLANNED_TRANSITION = "UnplannedTransition"
TARGET_MISMATCH = "TargetMismatch"


@dataclass(frozen=True, slots=True)
class SensorReading:
    sensor_id: str
    value: str
    at: float


@dataclass
class SensorMap:
    """Binding from fact index to the sensor that observes it."""

    bindings: dict[int, str]
    staleness_limit: float = DEFAULT_STALENESS_LIMIT


@dataclass(frozen=True)
class StateEstimate:
    """Aggregation result: the identified state (None = Unknown), the
    scene it came from, and which facts were stale or unread."""

    branch: str
    state: Optional[str]
    scene: SceneSnapshot
    stale_facts: frozenset[int]


@dataclass(frozen=True)
class Alarm:
    """An unexplained state change noticed between two estimates."""

    kind: str  # UNPLANNED_TRANSITION | TARGET_MISMATCH
    previous: Optional[str]
    new: Optional[str]
    dispatched: Optional[EdgeId]

    def describe(self) -> str:
        if self.kind == TARGET_MISMATCH:
            return (
                f"state moved {self.previous} -> {self.new} but dispatched"
                f" operation {self.dispatched!r} targets something else"
            )
        return f"state moved {self.previous} -> {self.new} with no dispatched operation"


class SensorStore:
    """Latest-reading-per-sensor store.

    Safe for concurrent producers; each ingest takes the lock and
    aggregation reads a consistent copy. Arrival order does not matter:
    the retained reading is always the one with the largest timestamp,
    and an arrival older than what is already stored is dropped with a
    warning kept in ``warnings``.
    """

    def __init__(self, sensor_ids: Optional[list[str]] = None) -> None:
        self._lock = threading.Lock()
        self._latest: dict[str, SensorReading] = {}
        self._registered: set[str] = set(sensor_ids or [])
        self.warnings: list[str] = []

    def register(self, sensor_id: str) -> None:
        with self._lock:
            self._registered.add(sensor_id)

    @property
    def registered(self) -> set[str]:
        with self._lock:
            return set(self._registered)

    def ingest_reading(self, reading: SensorReading) -> None:
        with self._lock:
            if reading.sensor_id not in self._registered:
                raise UnknownSensorError(
                    f"sensor {reading.sensor_id!r} is not registered"
                )
            held = self._latest.get(reading.sensor_id)
            if held is not None and reading.at < held.at:
                self.warnings.append(
                    f"discarded stale arrival for {reading.sensor_id!r}:"
                    f" t={reading.at} older than retained t={held.at}"
                )
                return
            self._latest[reading.sensor_id] = reading

    def latest(self, sensor_id: str) -> Optional[SensorReading]:
        with self._lock:
            return self._latest.get(sensor_id)

    def snapshot(self) -> dict[str, SensorReading]:
        with self._lock:
            return dict(self._latest)


def aggregate(
    branch: StateBranch,
    sensor_map: SensorMap,
    store: SensorStore,
    now: float,
) -> StateEstimate:
    """Build a state estimate from the latest readings.

    A fact is unknown when its sensor has no reading or the reading is
    older than the staleness limit; any unknown fact puts its index in
    ``stale_facts`` and forces the state to Unknown.

    Raises:
        NotDecodableError: When the branch has no usable fact count.
        IncompleteMapError: When some fact index has no sensor bound.
    """
    count = effective_fact_count(branch)
    if count is None:
        raise NotDecodableError(
            f"branch {branch.name!r} has no decodable fact configuration"
        )
    readings = store.snapshot()
    values: list[Optional[str]] = []
    stale: set[int] = set()
    for index in range(count):
        sensor_id = sensor_map.bindings.get(index)
        if sensor_id is None:
            raise IncompleteMapError(
                f"no sensor bound for fact index {index} of branch"
                f" {branch.name!r}"
            )
        reading = readings.get(sensor_id)
        if reading is None or now - reading.at > sensor_map.staleness_limit:
            values.append(None)
            stale.add(index)
        else:
            values.append(reading.value)
    scene = SceneSnapshot(branch=branch.name, values=tuple(values), as_of=now)
    state = identify_state(branch, scene)
    return StateEstimate(
        branch=branch.name,
        state=state,
        scene=scene,
        stale_facts=frozenset(stale),
    )


def detect_unplanned_transition(
    previous: StateEstimate,
    current: StateEstimate,
    dispatched: Optional[Edge] = None,
) -> Optional[Alarm]:
    """Compare consecutive estimates for unexplained movement.

    Returns an alarm when the identified state changed and either
    nothing was dispatched (UnplannedTransition) or the dispatched
    edge's target is not the new state (TargetMismatch). No alarm when
    the state is unchanged, or when either estimate is Unknown (a blind
    cycle is a staleness problem, not a transition).

    Raises:
        BranchMismatchError: When the two estimates disagree on branch.
    """
    if previous.branch != current.branch:
        raise BranchMismatchError(
            f"estimates compare {previous.branch!r} with {current.branch!r}"
        )
    if previous.state is None or current.state is None:
        return None
    if previous.state == current.state:
        return None
    if dispatched is None:
        return Alarm(
            kind=UNPLANNED_TRANSITION,
            previous=previous.state,
            new=current.state,
            dispatched=None,
        )
    if dispatched.dst != current.state:
        return Alarm(
            kind=TARGET_MISMATCH,
            previous=previous.state,
            new=current.state,
            dispatched=dispatched.id,
        )
    return None


class SimulatedWorld:
    """Ground truth for a simulated run: one fact value per index."""

    def __init__(self, branch: str, facts: list[str]) -> None:
        self.branch = branch
        self.facts = list(facts)

    @classmethod
    def at_state(cls, branch: StateBranch, state: str) -> "SimulatedWorld":
        config = decode_state_name(state)
        if config is None:
            raise NotDecodableError(
                f"cannot seed world from non-decodable state {state!r}"
            )
        return cls(branch.name, list(config))

    def set_facts(self, config: tuple[str, ...] | list[str]) -> None:
        self.facts = list(config)

    def set_fact(self, index: int, value: str) -> None:
        self.facts[index] = value


def sample_world(
    world: SimulatedWorld,
    sensor_map: SensorMap,
    store: SensorStore,
    now: float,
) -> None:
    """Read every bound fact of the world into the store at time now."""
    for index, sensor_id in sensor_map.bindings.items():
        if index < len(world.facts):
            store.ingest_reading(
                SensorReading(sensor_id=sensor_id, value=world.facts[index], at=now)
            )


def default_sensor_map(
    fact_count: int, staleness_limit: float = DEFAULT_STALENESS_LIMIT
) -> SensorMap:
    """One synthetic sensor per fact, named fact0, fact1, ..."""
    return SensorMap(
        bindings={i: f"fact{i}" for i in range(fact_count)},
        staleness_limit=staleness_limit,
    )


def parse_replay(text: str) -> list[SensorReading]:
    """Parse replay text: one ``<sensor_id> <value> <timestamp>`` per
    line; blank lines and lines starting with '#' are skipped."""
    readings: list[SensorReading] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(
                f"replay line {lineno}: expected"
                f" '<sensor_id> <value> <timestamp>', got {raw!r}"
            )
        readings.append(
            SensorReading(sensor_id=parts[0], value=parts[1], at=float(parts[2]))
        )
    return readings


def load_replay(path: str) -> list[SensorReading]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_replay(fh.read())


class SimClock:
    """A manually advanced clock for deterministic runs."""

    def __init__(self, start: float = 0.0) -> None:
        self.now = float(start)

    def tick(self, dt: float = 1.0) -> float:
        self.now += dt
        return self.now

    def __call__(self) -> float:
        return self.now


@dataclass
class MonitorContext:
    """Everything a session needs to watch one branch: the world, the
    sensors, the clock, and any scripted replay readings.

    Replay readings are delivered in timestamp order as the clock
    passes them, overriding whatever the world sampling wrote (they are
    ingested after sampling within each cycle).
    """

    branch: StateBranch
    world: SimulatedWorld
    sensor_map: SensorMap
    store: SensorStore
    clock: SimClock
    replay: list[SensorReading] = field(default_factory=list)
    _delivered: int = 0

    @classmethod
    def for_branch(
        cls,
        branch: StateBranch,
        initial_state: str,
        staleness_limit: float = DEFAULT_STALENESS_LIMIT,
        replay: Optional[list[SensorReading]] = None,
    ) -> "MonitorContext":
        """Wire up a context with one synthetic sensor per fact, the
        world seeded from ``initial_state``, and an initial sample at
        time zero."""
        count = effective_fact_count(branch)
        if count is None:
            raise NotDecodableError(
                f"branch {branch.name!r} has no decodable fact configuration"
            )
        world = SimulatedWorld.at_state(branch, initial_state)
        sensor_map = default_sensor_map(count, staleness_limit)
        store = SensorStore(sorted(sensor_map.bindings.values()))
        ordered = sorted(replay or [], key=lambda r: (r.at, r.sensor_id))
        ctx = cls(
            branch=branch,
            world=world,
            sensor_map=sensor_map,
            store=store,
            clock=SimClock(),
            replay=ordered,
        )
        ctx.sample()
        ctx.deliver_due()
        return ctx

    def tick(self, dt: float = 1.0) -> float:
        return self.clock.tick(dt)

    def sample(self) -> None:
        sample_world(self.world, self.sensor_map, self.store, self.clock.now)

    def deliver_due(self) -> int:
        """Ingest replay readings whose timestamp has been reached.

        Returns how many were delivered this call.
        """
        delivered = 0
        while self._delivered < len(self.replay):
            reading = self.replay[self._delivered]
            if reading.at > self.clock.now:
                break
            self.store.ingest_reading(reading)
            self._delivered += 1
            delivered += 1
        return delivered

    def estimate(self) -> StateEstimate:
        return aggregate(self.branch, self.sensor_map, self.store, self.clock.now)
