"""Shared wireless medium: per-NIC FIFO queues and conflict-aware arbitration.

Contention never loses frames. A backlogged transmitter starts as soon as no
conflicting transmission is in flight; among contenders the beacon or TR goes
first, then the oldest head-of-line frame, then the lowest node order.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from forwarding.data_plane import FrameMeta
from simulation.conflict_graph import ConflictGraph, Transmission, conflicts

logger = logging.getLogger(__name__)


class AirFrameKind(Enum):
    """What a queued frame carries."""

    BEACON = "beacon"
    TR = "tr"
    DATA = "data"
    HOST_UP = "host-up"
    HOST_DOWN = "host-down"

    @property
    def is_control(self) -> bool:
        return self in (AirFrameKind.BEACON, AirFrameKind.TR)


@dataclass
class AirFrame:
    """A frame waiting for or occupying the air."""

    frame_id: int
    kind: AirFrameKind
    data: bytes
    receiver: str | None
    airtime_us: int
    enqueued_us: int
    meta: FrameMeta | None = None

    @property
    def label(self) -> str:
        return f"{self.kind.value}-{self.frame_id}"


@dataclass
class Transmitter:
    """One sending interface: a NIC, or a wireless host's radio."""

    node_id: str
    label: str
    node_order: int
    control: deque[AirFrame] = field(default_factory=deque)
    data: deque[AirFrame] = field(default_factory=deque)
    busy: bool = False

    @property
    def backlogged(self) -> bool:
        return bool(self.control or self.data)

    def head(self) -> AirFrame | None:
        if self.control:
            return self.control[0]
        if self.data:
            return self.data[0]
        return None

    def pop_head(self) -> AirFrame:
        return self.control.popleft() if self.control else self.data.popleft()


@dataclass(frozen=True)
class Contender:
    """A backlogged transmitter bidding for the air."""

    transmitter: Transmitter
    transmission: Transmission
    frame: AirFrame

    @property
    def priority(self) -> tuple[int, int, int, str]:
        return (
            0 if self.frame.kind.is_control else 1,
            self.frame.enqueued_us,
            self.transmitter.node_order,
            self.transmitter.label,
        )


@dataclass(frozen=True)
class TxLogEntry:
    """A completed or ongoing transmission, for exclusivity checks."""

    start_us: int
    end_us: int
    transmission: Transmission
    frame_label: str


def arbitrate(
    backlog: Sequence[Contender],
    active: Sequence[Transmission],
    graph: ConflictGraph,
) -> list[Contender]:
    """Contenders that may start now, greedily in priority order."""
    started: list[Contender] = []
    on_air: list[Transmission] = list(active)

    for contender in sorted(backlog, key=lambda c: c.priority):
        if any(conflicts(contender.transmission, other, graph) for other in on_air):
            continue
        started.append(contender)
        on_air.append(contender.transmission)
    return started


class Medium:
    """Owns the transmitters and the set of transmissions in flight."""

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, graph: ConflictGraph, queue_depth: int = 100, keep_log: bool = False) -> None:
        self.graph: ConflictGraph = graph
        self.queue_depth: int = queue_depth
        self.keep_log: bool = keep_log
        self.transmitters: dict[tuple[str, str], Transmitter] = {}
        self.in_flight: dict[tuple[str, str], tuple[Transmission, AirFrame, int]] = {}
        self.log: list[TxLogEntry] = []

    def transmitter(self, node_id: str, label: str, node_order: int) -> Transmitter:
        """Get or create the transmitter ``label`` of ``node_id``."""
        key = (node_id, label)
        if key not in self.transmitters:
            self.transmitters[key] = Transmitter(node_id, label, node_order)
        return self.transmitters[key]

    # ------------------------------------------------------------------
    # Queueing
    # ------------------------------------------------------------------

    def enqueue(self, transmitter: Transmitter, frame: AirFrame) -> bool:
        """Control frames always queue; data frames are tail-dropped at the queue depth."""
        if frame.kind.is_control:
            transmitter.control.append(frame)
            return True
        if len(transmitter.data) >= self.queue_depth:
            return False
        transmitter.data.append(frame)
        return True

    def flush(self, transmitter: Transmitter) -> list[AirFrame]:
        """Empty both queues and return what was waiting."""
        flushed: list[AirFrame] = list(transmitter.control) + list(transmitter.data)
        transmitter.control.clear()
        transmitter.data.clear()
        return flushed

    # ------------------------------------------------------------------
    # Air
    # ------------------------------------------------------------------

    def start_ready(
        self,
        now_us: int,
        channel_of: Callable[[Transmitter], int | None],
    ) -> list[tuple[Transmitter, AirFrame, int]]:
        """Start every transmission arbitration allows now; returns (transmitter, frame, end)."""
        backlog: list[Contender] = []
        for transmitter in self.transmitters.values():
            if transmitter.busy or not transmitter.backlogged:
                continue
            channel: int | None = channel_of(transmitter)
            if channel is None:
                continue
            frame = transmitter.head()
            assert frame is not None
            backlog.append(
                Contender(
                    transmitter,
                    Transmission(transmitter.node_id, frame.receiver, channel),
                    frame,
                )
            )

        if not backlog:
            return []

        active: list[Transmission] = [entry[0] for entry in self.in_flight.values()]
        started: list[tuple[Transmitter, AirFrame, int]] = []

        for contender in arbitrate(backlog, active, self.graph):
            transmitter = contender.transmitter
            frame = transmitter.pop_head()
            end_us: int = now_us + frame.airtime_us
            transmitter.busy = True
            self.in_flight[(transmitter.node_id, transmitter.label)] = (
                contender.transmission,
                frame,
                now_us,
            )
            started.append((transmitter, frame, end_us))
        return started

    def finish(self, transmitter: Transmitter, now_us: int) -> tuple[Transmission, AirFrame]:
        """Free the air held by ``transmitter``."""
        transmission, frame, start_us = self.in_flight.pop((transmitter.node_id, transmitter.label))
        transmitter.busy = False
        if self.keep_log:
            self.log.append(TxLogEntry(start_us, now_us, transmission, frame.label))
        return transmission, frame

    def active_transmissions(self) -> list[Transmission]:
        return [entry[0] for entry in self.in_flight.values()]
