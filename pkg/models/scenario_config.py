"""Validated experiment scenario: nodes, adjacency, channel plan, traffic and constants."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import ClassVar

from models.channel_plan import Band, ChannelPlan
from models.simulation_constants import SimulationConstants
from utils.errors import ConfigurationError


class Mode(Enum):
    """Dual-radio mesh or the single-radio TR baseline."""

    DUAL = "dual"
    SINGLE = "single"

    @classmethod
    def parse(cls, text: str) -> Mode:
        cleaned: str = text.strip().lower()
        aliases: dict[str, Mode] = {
            "dual": cls.DUAL,
            "dual-radio": cls.DUAL,
            "single": cls.SINGLE,
            "single-radio": cls.SINGLE,
            "baseline": cls.SINGLE,
        }
        if cleaned not in aliases:
            raise ConfigurationError(f"unknown mode {text!r}")
        return aliases[cleaned]


class HostKind(Enum):
    """How the client host reaches its MAP."""

    WIRED = "wired"
    WIRELESS = "wireless"


@dataclass(frozen=True)
class NodeSpec:
    node_id: str
    mac: bytes
    is_gw: bool = False
    host: HostKind = HostKind.WIRED


@dataclass(frozen=True)
class EdgeSpec:
    a: str
    b: str
    rssi: float = -60.0


@dataclass(frozen=True)
class FlowSpec:
    """Constant-bit-rate UDP-like flow from a MAP's host to the GW-side host."""

    flow_id: int
    src_node: str
    rate_mbps: float
    packet_size: int = 1400
    start_s: float = 0.0
    stop_s: float | None = None

    @property
    def interval_us(self) -> float:
        """Packet spacing at the configured rate."""
        return self.packet_size * 8 / self.rate_mbps


@dataclass(frozen=True)
class NodeEventSpec:
    """Scheduled failure or recovery of a node, in absolute simulated seconds."""

    action: str
    node_id: str
    time_s: float

    @property
    def time_us(self) -> int:
        return round(self.time_s * 1_000_000)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one experiment needs."""

    FORMAT_VERSION: ClassVar[str] = "1.0"
    DEFAULT_DURATION_S: ClassVar[float] = 60.0
    DEFAULT_RSSI: ClassVar[float] = -60.0

    name: str
    nodes: tuple[NodeSpec, ...]
    edges: tuple[EdgeSpec, ...]
    plan: ChannelPlan = field(default_factory=ChannelPlan)
    mode: Mode = Mode.DUAL
    gw_channel: int | None = None
    gw_band: Band = Band.BAND_24
    flows: tuple[FlowSpec, ...] = ()
    constants: SimulationConstants = field(default_factory=SimulationConstants)
    duration_s: float = DEFAULT_DURATION_S
    repetitions: int = 1
    seed: int = 1
    events: tuple[NodeEventSpec, ...] = ()

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    @property
    def gw(self) -> NodeSpec:
        return next(spec for spec in self.nodes if spec.is_gw)

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(spec.node_id for spec in self.nodes)

    def node(self, node_id: str) -> NodeSpec:
        for spec in self.nodes:
            if spec.node_id == node_id:
                return spec
        raise KeyError(node_id)

    def adjacency(self) -> dict[str, set[str]]:
        """Symmetric neighbor sets, every node present."""
        neighbors: dict[str, set[str]] = {spec.node_id: set() for spec in self.nodes}
        for edge in self.edges:
            neighbors[edge.a].add(edge.b)
            neighbors[edge.b].add(edge.a)
        return neighbors

    def rssi(self, a: str, b: str) -> float:
        """Declared signal strength of the link, or the default."""
        for edge in self.edges:
            if {edge.a, edge.b} == {a, b}:
                return edge.rssi
        return self.DEFAULT_RSSI

    @property
    def duration_us(self) -> int:
        return round(self.duration_s * 1_000_000)

    @property
    def offered_load_mbps(self) -> float:
        """Per-flow offered load when all flows share one rate, else the mean."""
        if not self.flows:
            return 0.0
        return sum(flow.rate_mbps for flow in self.flows) / len(self.flows)

    # ------------------------------------------------------------------
    # Variants
    # ------------------------------------------------------------------

    def with_mode(self, mode: Mode) -> ScenarioConfig:
        return replace(self, mode=mode)

    def with_load(self, rate_mbps: float) -> ScenarioConfig:
        """Every flow set to ``rate_mbps``."""
        return replace(self, flows=tuple(replace(flow, rate_mbps=rate_mbps) for flow in self.flows))

    def with_flows(self, flows: tuple[FlowSpec, ...]) -> ScenarioConfig:
        return replace(self, flows=flows)

    def with_duration(self, duration_s: float) -> ScenarioConfig:
        return replace(self, duration_s=duration_s)

    def with_seed(self, seed: int) -> ScenarioConfig:
        return replace(self, seed=seed)

    def with_constants(self, constants: SimulationConstants) -> ScenarioConfig:
        return replace(self, constants=constants)

    def with_repetitions(self, repetitions: int) -> ScenarioConfig:
        return replace(self, repetitions=repetitions)
