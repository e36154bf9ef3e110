"""Data models for the frames exchanged between mesh nodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar


@dataclass(frozen=True)
class EthernetFrame:
    """An inner Ethernet frame as seen by the learning bridges."""

    HEADER_LENGTH: ClassVar[int] = 14
    ETHERTYPE_IPV4: ClassVar[int] = 0x0800
    ETHERTYPE_ARP: ClassVar[int] = 0x0806

    dst: bytes
    src: bytes
    ethertype: int
    payload: bytes = b""

    @property
    def length(self) -> int:
        """Octets on the wire, header included."""
        return self.HEADER_LENGTH + len(self.payload)

    @property
    def is_group(self) -> bool:
        """Broadcast or multicast destination."""
        return bool(self.dst[0] & 0x01)


@dataclass(frozen=True)
class Eo11Frame:
    """Hop-by-hop Ethernet-over-802.11 header wrapping an inner frame."""

    ETHERTYPE: ClassVar[int] = 0x88B5
    HEADER_LENGTH: ClassVar[int] = 14

    outer_dst: bytes
    outer_src: bytes
    inner: EthernetFrame
    outer_ethertype: int = ETHERTYPE


@dataclass(frozen=True)
class TrMessage:
    """Topology Refresh message of the single-radio baseline."""

    WIRE_LENGTH: ClassVar[int] = 13

    hops: int
    parent_addr: bytes
    origin_addr: bytes


@dataclass(frozen=True)
class Beacon:
    """An AP beacon carrying the WiFIX-DR vendor IE."""

    MAX_BODY_LENGTH: ClassVar[int] = 2320
    DEFAULT_SSID: ClassVar[str] = "wifix-dr"

    bssid: bytes
    hops: int
    channel_list: tuple[int, ...] = field(default_factory=tuple)
    tx_channel: int = 0
    ssid: str = DEFAULT_SSID
    timestamp: int = 0
