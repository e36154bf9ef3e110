"""Raw per-frame records and the aggregated experiment report."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class FrameRecord:
    """Life of one application packet."""

    flow_id: int
    seq: int
    src_node: str
    created_us: int
    delivered_us: int | None = None
    dropped: bool = False
    hops: int = 0
    octets: int = 0

    @property
    def delivered(self) -> bool:
        return self.delivered_us is not None

    @property
    def delay_us(self) -> int | None:
        if self.delivered_us is None:
            return None
        return self.delivered_us - self.created_us


@dataclass(frozen=True)
class FlowMetrics:
    """Per-flow results over the traffic window."""

    flow_id: int
    src_node: str
    offered_load_mbps: float
    throughput_mbps: float
    delay_ms: float
    drops: int
    generated: int = 0
    delivered: int = 0
    queued: int = 0


@dataclass(frozen=True)
class NodeSummary:
    """Converged position and counters of one node."""

    node_id: str
    depth: int | None
    parent: str | None
    up_channel: int | None
    down_channel: int | None
    rx: int = 0
    tx: int = 0
    relayed: int = 0
    flooded: int = 0
    dropped: int = 0


@dataclass
class MetricsReport:
    """Aggregated outcome of one run, or the mean over repetitions."""

    mode: str
    offered_load_mbps: float
    flows: list[FlowMetrics] = field(default_factory=list)
    jain_index: float = 1.0
    convergence_us: int = 0
    duration_us: int = 0
    nodes: list[NodeSummary] = field(default_factory=list)
    repetitions: int = 1

    @property
    def mean_throughput_mbps(self) -> float:
        if not self.flows:
            return 0.0
        return sum(flow.throughput_mbps for flow in self.flows) / len(self.flows)

    @property
    def mean_delay_ms(self) -> float:
        delays: list[float] = [flow.delay_ms for flow in self.flows if flow.delivered]
        if not delays:
            return 0.0
        return sum(delays) / len(delays)

    @property
    def total_drops(self) -> int:
        return sum(flow.drops for flow in self.flows)

    def flow(self, flow_id: int) -> FlowMetrics:
        return next(flow for flow in self.flows if flow.flow_id == flow_id)


@dataclass
class RunInfo:
    """One stored simulation run."""

    scenario: str
    mode: str
    offered_load_mbps: float
    seed: int
    window_start_us: int
    window_end_us: int
    id: int | None = None

    @property
    def duration_us(self) -> int:
        return self.window_end_us - self.window_start_us
