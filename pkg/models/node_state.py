"""Per-node protocol state of a WiFIX-DR mesh node."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar

from forwarding.bridge_table import BridgeTable
from forwarding.data_plane import ForwardingCounters
from forwarding.port_binding import PortBinding
from models.nic import NicMode, NicRole, NicState


@dataclass
class CandidateParent:
    """A beaconing AP an unattached MAP could join."""

    bssid: bytes
    node_id: str
    hops: int
    channel_list: tuple[int, ...]
    tx_channel: int
    rssi: float
    heard_at: int


@dataclass
class NodeState:
    """Protocol state of one mesh node (GW or MAP)."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    GW_DEPTH: ClassVar[int] = 0

    # Identity
    node_id: str
    mac: bytes
    is_gw: bool = False
    dual_radio: bool = True

    # Radios
    nics: dict[NicRole, NicState] = field(default_factory=dict)

    # Tree position
    parent_mac: bytes | None = None
    parent_id: str | None = None
    depth: int | None = None
    parent_channel_list: tuple[int, ...] = ()
    children: set[bytes] = field(default_factory=set)

    # Discovery
    candidate_parents: dict[bytes, CandidateParent] = field(default_factory=dict)
    missed_beacon_count: int = 0
    last_parent_heard_us: int | None = None
    scan_pending: bool = False
    pending_parent: CandidateParent | None = None
    orphan_depth: int | None = None
    orphaned_at_us: int | None = None

    # Forwarding
    tunnels: dict[bytes, PortBinding] = field(default_factory=dict)
    bridge: BridgeTable = field(default_factory=BridgeTable)
    counters: ForwardingCounters = field(default_factory=ForwardingCounters)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def create(
        cls,
        node_id: str,
        mac: bytes,
        is_gw: bool,
        dual_radio: bool = True,
        bridge_aging_us: int = BridgeTable.DEFAULT_AGING_US,
    ) -> NodeState:
        """Fresh node with its NICs idle: GW and baseline nodes get one NIC, MAPs two."""
        if is_gw or not dual_radio:
            nics = {NicRole.SINGLE: NicState(NicRole.SINGLE, mac)}
        else:
            nics = {
                NicRole.UP: NicState(NicRole.UP, mac),
                NicRole.DOWN: NicState(NicRole.DOWN, mac),
            }
        node = cls(
            node_id=node_id,
            mac=mac,
            is_gw=is_gw,
            dual_radio=dual_radio,
            nics=nics,
            bridge=BridgeTable(bridge_aging_us),
        )
        if is_gw:
            node.depth = cls.GW_DEPTH
        return node

    # ------------------------------------------------------------------
    # NIC Access
    # ------------------------------------------------------------------

    @property
    def up_nic(self) -> NicState:
        """NIC facing the parent (the single NIC on one-radio nodes)."""
        return self.nics.get(NicRole.UP) or self.nics[NicRole.SINGLE]

    @property
    def down_nic(self) -> NicState:
        """NIC serving the children (the single NIC on one-radio nodes)."""
        return self.nics.get(NicRole.DOWN) or self.nics[NicRole.SINGLE]

    @property
    def is_single_nic(self) -> bool:
        """GW, or any node of the single-radio baseline."""
        return NicRole.SINGLE in self.nics

    # ------------------------------------------------------------------
    # Tree Status
    # ------------------------------------------------------------------

    @property
    def is_attached(self) -> bool:
        """GW, or a MAP holding a parent association."""
        return self.is_gw or (self.parent_mac is not None and self.up_nic.mode is NicMode.ASSOCIATED)

    @property
    def is_beaconing(self) -> bool:
        """An attached node whose AP side is up."""
        return self.is_attached and self.down_nic.mode is NicMode.AP_ACTIVE

    @property
    def parent_port(self) -> PortBinding | None:
        """Tunnel port towards the parent, if any."""
        if self.parent_mac is None:
            return None
        return self.tunnels.get(self.parent_mac)
