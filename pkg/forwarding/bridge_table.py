"""802.1D-style learning bridge table."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from forwarding.port_binding import PortBinding, PortKind
from models.nic import NicRole

logger = logging.getLogger(__name__)


@dataclass
class BridgeEntry:
    """Where a MAC was last seen."""

    port_id: int
    last_seen_us: int


class BridgeTable:
    """MAC→port table with aging, flooding of unknown destinations and port lifecycle."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    LOCAL_PORT_ID: int = 0
    DEFAULT_AGING_US: int = 300 * 1_000_000

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, aging_us: int = DEFAULT_AGING_US) -> None:
        """Create a bridge holding only the local host port."""
        self.aging_us: int = aging_us
        self.ports: dict[int, PortBinding] = {
            self.LOCAL_PORT_ID: PortBinding(self.LOCAL_PORT_ID, PortKind.LOCAL_HOST)
        }
        self.entries: dict[bytes, BridgeEntry] = {}
        self._next_port_id: int = self.LOCAL_PORT_ID + 1

    # ------------------------------------------------------------------
    # Port Lifecycle
    # ------------------------------------------------------------------

    def add_tunnel_port(self, peer_mac: bytes, nic: NicRole) -> PortBinding:
        """Attach a new tunnel port towards ``peer_mac``."""
        binding = PortBinding(self._next_port_id, PortKind.TUNNEL, peer_mac, nic)
        self.ports[binding.port_id] = binding
        self._next_port_id += 1
        return binding

    def remove_port(self, port_id: int) -> int:
        """Detach a port and purge every entry learned on it; returns the purge count."""
        if port_id == self.LOCAL_PORT_ID or port_id not in self.ports:
            return 0

        del self.ports[port_id]
        stale: list[bytes] = [mac for mac, entry in self.entries.items() if entry.port_id == port_id]
        for mac in stale:
            del self.entries[mac]
        return len(stale)

    @property
    def tunnel_ports(self) -> list[PortBinding]:
        """Tunnel ports in creation order."""
        return [binding for binding in self.ports.values() if binding.is_tunnel]

    # ------------------------------------------------------------------
    # Learning and Lookup
    # ------------------------------------------------------------------

    def learn(self, mac: bytes, port_id: int, now_us: int) -> None:
        """Bind a unicast source MAC to its ingress port."""
        if mac[0] & 0x01:
            return
        entry: BridgeEntry | None = self.entries.get(mac)
        if entry is None:
            self.entries[mac] = BridgeEntry(port_id, now_us)
            return
        if entry.port_id != port_id:
            logger.debug("station moved to port %d", port_id)
        entry.port_id = port_id
        entry.last_seen_us = now_us

    def lookup(self, mac: bytes, now_us: int) -> int | None:
        """Port for ``mac``, or None when unknown or aged out."""
        entry: BridgeEntry | None = self.entries.get(mac)
        if entry is None:
            return None
        if now_us - entry.last_seen_us > self.aging_us:
            del self.entries[mac]
            return None
        return entry.port_id

    def egress_ports(self, ingress_port: int, dst: bytes, now_us: int) -> tuple[list[int], bool]:
        """Forwarding decision for ``dst``: (ports, flooded)."""
        known: int | None = None if dst[0] & 0x01 else self.lookup(dst, now_us)

        if known is None:
            return [port_id for port_id in self.ports if port_id != ingress_port], True

        if known == ingress_port:
            return [], False

        return [known], False
