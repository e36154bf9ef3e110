"""Per-node layer-2 forwarding: learning bridge, binary NIC choice and Eo11 relaying."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Protocol

from codec.eo11_codec import Eo11Codec
from models.frames import Eo11Frame, EthernetFrame
from utils.errors import ConsistencyError, DecodeError
from utils.mac_formatter import MacFormatter

if TYPE_CHECKING:
    from forwarding.port_binding import PortBinding
    from models.nic import NicState
    from models.node_state import NodeState

logger = logging.getLogger(__name__)


@dataclass
class ForwardingCounters:
    """Per-node forwarding statistics."""

    rx: int = 0
    tx: int = 0
    relayed: int = 0
    flooded: int = 0
    dropped: int = 0


@dataclass(frozen=True)
class FrameMeta:
    """Bookkeeping that travels with a frame copy but is not part of its octets."""

    frame_id: int
    flow_id: int | None = None
    seq: int | None = None
    created_us: int = 0
    path: tuple[str, ...] = ()


class FrameSink(Protocol):
    """What the data plane needs from the medium it runs on."""

    def transmit(self, node: NodeState, nic: NicState, data: bytes, meta: FrameMeta) -> bool:
        """Queue octets for the air on ``nic``; False when the queue is full."""
        ...

    def deliver_local(self, node: NodeState, frame: EthernetFrame, meta: FrameMeta) -> None:
        """Hand a frame to the host behind the node's local port."""
        ...

    def frame_dropped(self, node: NodeState, meta: FrameMeta, reason: str) -> None:
        """Account for a frame copy that went nowhere."""
        ...


class DataPlane:
    """Bridges frames between a node's local host port and its Eo11 tunnels."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    DROP_QUEUE_FULL: str = "queue-full"
    DROP_NO_TUNNEL: str = "no-tunnel"
    DROP_MALFORMED: str = "malformed"

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, sink: FrameSink) -> None:
        """Bind the data plane to the medium that carries its frames."""
        self.sink: FrameSink = sink

    # ------------------------------------------------------------------
    # Bridge
    # ------------------------------------------------------------------

    def bridge_ingress(
        self, node: NodeState, port_id: int, inner: EthernetFrame, now_us: int
    ) -> list[int]:
        """Learn the source on ``port_id`` and return the egress ports for the destination."""
        node.bridge.learn(inner.src, port_id, now_us)
        ports, flooded = node.bridge.egress_ports(port_id, inner.dst, now_us)
        if flooded and ports:
            node.counters.flooded += 1
        return ports

    def originate(self, node: NodeState, inner: EthernetFrame, meta: FrameMeta, now_us: int) -> None:
        """A frame sent by the host on the node's local port."""
        meta = replace(meta, path=meta.path + (node.node_id,))
        ports: list[int] = self.bridge_ingress(node, node.bridge.LOCAL_PORT_ID, inner, now_us)
        self._dispatch(node, ports, inner, meta)

    # ------------------------------------------------------------------
    # NIC Selection
    # ------------------------------------------------------------------

    def select_nic(self, node: NodeState, binding: PortBinding) -> NicState:
        """Parent tunnel rides the UP-NIC, child tunnels the DOWN-NIC."""
        if node.is_single_nic:
            return node.up_nic
        if binding.peer_mac is not None and binding.peer_mac == node.parent_mac:
            return node.up_nic
        if binding.peer_mac in node.children:
            return node.down_nic
        raise ConsistencyError(
            f"{node.node_id}: tunnel peer {MacFormatter.format(binding.peer_mac or b'')} "
            "is neither parent nor child"
        )

    # ------------------------------------------------------------------
    # Transmit
    # ------------------------------------------------------------------

    def send_over_tunnel(
        self, node: NodeState, port_id: int, inner: EthernetFrame, meta: FrameMeta
    ) -> bool:
        """Encapsulate towards the tunnel peer and queue on the selected NIC."""
        binding: PortBinding = node.bridge.ports[port_id]
        assert binding.peer_mac is not None

        nic: NicState = self.select_nic(node, binding)
        outer: Eo11Frame = Eo11Codec.encode(inner, binding.peer_mac, node.mac)

        if not self.sink.transmit(node, nic, Eo11Codec.to_bytes(outer), meta):
            node.counters.dropped += 1
            self.sink.frame_dropped(node, meta, self.DROP_QUEUE_FULL)
            return False

        node.counters.tx += 1
        return True

    # ------------------------------------------------------------------
    # Receive
    # ------------------------------------------------------------------

    def receive_octets(self, node: NodeState, data: bytes, meta: FrameMeta, now_us: int) -> bool:
        """Parse an Eo11 frame off the air and process it."""
        try:
            outer: Eo11Frame = Eo11Codec.from_bytes(data)
        except DecodeError as exc:
            logger.debug("%s: undecodable Eo11 frame (%s)", node.node_id, exc)
            node.counters.dropped += 1
            self.sink.frame_dropped(node, meta, self.DROP_MALFORMED)
            return False
        return self.on_receive(node, outer, meta, now_us)

    def on_receive(self, node: NodeState, outer: Eo11Frame, meta: FrameMeta, now_us: int) -> bool:
        """Decapsulate a frame addressed to this node and bridge it onwards."""
        if outer.outer_dst != node.mac or outer.outer_ethertype != Eo11Frame.ETHERTYPE:
            return False

        binding: PortBinding | None = node.tunnels.get(outer.outer_src)
        if binding is None:
            logger.warning(
                "%s: frame from %s without a tunnel, dropped",
                node.node_id,
                MacFormatter.format(outer.outer_src),
            )
            node.counters.dropped += 1
            self.sink.frame_dropped(node, meta, self.DROP_NO_TUNNEL)
            return False

        node.counters.rx += 1
        inner: EthernetFrame = Eo11Codec.decode(outer)
        meta = replace(meta, path=meta.path + (node.node_id,))

        ports: list[int] = self.bridge_ingress(node, binding.port_id, inner, now_us)
        if any(port != node.bridge.LOCAL_PORT_ID for port in ports):
            node.counters.relayed += 1
        self._dispatch(node, ports, inner, meta)
        return True

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _dispatch(
        self, node: NodeState, ports: list[int], inner: EthernetFrame, meta: FrameMeta
    ) -> None:
        """Send one copy per egress port."""
        for port_id in ports:
            if port_id == node.bridge.LOCAL_PORT_ID:
                self.sink.deliver_local(node, inner, meta)
            else:
                self.send_over_tunnel(node, port_id, inner, meta)
