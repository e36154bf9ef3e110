"""Bridge port bindings: the local host port and one tap-like port per tunnel."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from models.nic import NicRole


class PortKind(Enum):
    """What sits behind a bridge port."""

    LOCAL_HOST = "local-host"
    TUNNEL = "tunnel"


@dataclass(frozen=True)
class PortBinding:
    """A bridge port; tunnel ports name their peer and the NIC they ride on."""

    port_id: int
    kind: PortKind
    peer_mac: bytes | None = None
    nic: NicRole | None = None

    @property
    def is_tunnel(self) -> bool:
        """True for Eo11 virtual-link ports."""
        return self.kind is PortKind.TUNNEL
