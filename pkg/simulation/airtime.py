"""802.11a/g airtime of one DATA+ACK exchange with the mean backoff folded in."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from utils.errors import ConfigurationError


@dataclass(frozen=True)
class AirtimeConstants:
    """OFDM PHY/MAC timing, all strictly positive."""

    slot_us: float = 9.0
    sifs_us: float = 16.0
    difs_us: float = 34.0
    cw_min: int = 15
    plcp_us: float = 20.0
    data_rate_mbps: float = 54.0
    control_rate_mbps: float = 24.0
    ack_size: int = 14
    mac_overhead: int = 28

    def __post_init__(self) -> None:
        for spec in fields(self):
            value = getattr(self, spec.name)
            if value <= 0:
                raise ConfigurationError(f"{spec.name} must be positive, got {value}")

    @property
    def mean_backoff_us(self) -> float:
        """Mean backoff of a contention window of cw_min slots."""
        return self.cw_min * self.slot_us / 2


def airtime(payload_octets: int, constants: AirtimeConstants = AirtimeConstants()) -> float:
    """Duration in µs of sending ``payload_octets`` and receiving the ACK."""
    if payload_octets < 0:
        raise ValueError(f"payload_octets must be non-negative, got {payload_octets}")

    c = constants
    data_us: float = 8 * (c.mac_overhead + payload_octets) / c.data_rate_mbps
    ack_us: float = 8 * c.ack_size / c.control_rate_mbps
    return c.difs_us + c.mean_backoff_us + c.plcp_us + data_us + c.sifs_us + c.plcp_us + ack_us


def airtime_us(payload_octets: int, constants: AirtimeConstants = AirtimeConstants()) -> int:
    """Airtime rounded up to the simulator's integer microsecond clock."""
    return math.ceil(airtime(payload_octets, constants) - 1e-9)


def saturation_throughput_mbps(
    packet_size: int, frame_octets: int, constants: AirtimeConstants = AirtimeConstants()
) -> float:
    """Application throughput of one backlogged sender alone on its channel."""
    return 8 * packet_size / airtime(frame_octets, constants)
