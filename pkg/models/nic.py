"""NIC roles, modes and per-NIC state."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from models.channel_plan import Band


class NicRole(Enum):
    """Which side of the tree a NIC faces."""

    UP = "up"            # station towards the parent
    DOWN = "down"        # access point for the children
    SINGLE = "single"    # the GW's only NIC, and every NIC in the baseline


class NicMode(Enum):
    """Lifecycle of a NIC."""

    IDLE = "idle"
    SCANNING = "scanning"
    ASSOCIATING = "associating"
    ASSOCIATED = "associated"
    AP_ACTIVE = "ap-active"


@dataclass
class NicState:
    """One radio interface of a mesh node."""

    role: NicRole
    mac: bytes
    band: Band | None = None
    channel: int | None = None
    mode: NicMode = NicMode.IDLE

    @property
    def is_configured(self) -> bool:
        """Band and channel both set."""
        return self.band is not None and self.channel is not None

    def configure(self, band: Band, channel: int, mode: NicMode) -> None:
        """Tune the NIC and switch its mode."""
        self.band = band
        self.channel = channel
        self.mode = mode

    def reset(self) -> None:
        """Back to an untuned idle NIC."""
        self.band = None
        self.channel = None
        self.mode = NicMode.IDLE
