"""Deterministic discrete-event queue on an integer microsecond clock."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class SimEventKind(Enum):
    """Event kinds; the second field is the tie-break rank at equal times."""

    NODE_DOWN = ("node-down", 0)
    NODE_UP = ("node-up", 1)
    TX_START = ("tx-start", 2)
    TX_END = ("tx-end", 3)
    DELIVER = ("deliver", 4)
    STATION_LOST = ("station-lost", 5)
    PARENT_CHECK = ("parent-check", 6)
    ASSOC_COMPLETE = ("assoc-complete", 7)
    SCAN_DONE = ("scan-done", 8)
    BEACON_DUE = ("beacon-due", 9)
    TR_DUE = ("tr-due", 10)
    APP_ARRIVAL = ("app-arrival", 11)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def rank(self) -> int:
        return self.value[1]


@dataclass(order=True)
class SimEvent:
    """One scheduled event, ordered by (time, kind rank, node order, sequence)."""

    time_us: int
    rank: int
    node_order: int
    seq: int
    kind: SimEventKind = field(compare=False)
    node: str = field(compare=False)
    payload: Any = field(default=None, compare=False)


class EventQueue:
    """Heap of SimEvents with a monotonically increasing sequence number."""

    def __init__(self) -> None:
        self._heap: list[SimEvent] = []
        self._seq: int = 0

    def __len__(self) -> int:
        return len(self._heap)

    def push(
        self,
        time_us: int,
        kind: SimEventKind,
        node: str,
        node_order: int,
        payload: Any = None,
    ) -> SimEvent:
        """Schedule an event; times must be integers."""
        event = SimEvent(int(time_us), kind.rank, node_order, self._seq, kind, node, payload)
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> SimEvent:
        return heapq.heappop(self._heap)

    def peek_time(self) -> int | None:
        """Time of the next event, None when empty."""
        return self._heap[0].time_us if self._heap else None
