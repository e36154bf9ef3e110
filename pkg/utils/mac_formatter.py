"""MAC address parsing, formatting and the derived host addresses used by scenarios."""

from __future__ import annotations

import re

from utils.errors import ConfigurationError


class MacFormatter:
    """Convert between 6-octet MAC values and their colon-separated text form."""

    MAC_LENGTH: int = 6
    SEPARATOR: str = ":"
    PATTERN: re.Pattern[str] = re.compile(r"^[0-9a-fA-F]{2}([:-][0-9a-fA-F]{2}){5}$")

    BROADCAST: bytes = b"\xff" * 6

    # Locally administered prefixes for synthesized addresses
    NODE_PREFIX: bytes = b"\x02\x00\x00\x00"
    HOST_PREFIX: bytes = b"\x06\x00\x00\x00"
    INFRASTRUCTURE_HOST: bytes = b"\x06\x00\x00\x00\xff\xfe"

    ERROR_BAD_MAC: str = "not a MAC address: {text!r}"
    ERROR_INDEX_RANGE: str = "node index {index} out of range"

    # ------------------------------------------------------------------
    # Text Conversion
    # ------------------------------------------------------------------

    @staticmethod
    def format(mac: bytes) -> str:
        """Return lowercase colon-separated text for a MAC."""
        return MacFormatter.SEPARATOR.join(f"{octet:02x}" for octet in mac)

    @staticmethod
    def parse(text: str) -> bytes:
        """Parse ``aa:bb:cc:dd:ee:ff`` (or dash-separated) into six octets."""
        stripped: str = text.strip()
        if not MacFormatter.PATTERN.match(stripped):
            raise ConfigurationError(MacFormatter.ERROR_BAD_MAC.format(text=text))
        return bytes(int(part, 16) for part in re.split(r"[:-]", stripped))

    # ------------------------------------------------------------------
    # Address Classes
    # ------------------------------------------------------------------

    @staticmethod
    def is_broadcast(mac: bytes) -> bool:
        """Group bit set (broadcast or multicast)."""
        return bool(mac[0] & 0x01)

    @staticmethod
    def node_mac(index: int) -> bytes:
        """Default MAC for the mesh node at ``index``."""
        return MacFormatter._synthesize(MacFormatter.NODE_PREFIX, index)

    @staticmethod
    def host_mac(index: int) -> bytes:
        """MAC of the client host attached to the mesh node at ``index``."""
        return MacFormatter._synthesize(MacFormatter.HOST_PREFIX, index)

    @staticmethod
    def _synthesize(prefix: bytes, index: int) -> bytes:
        if not 0 <= index < 0xFFFE:
            raise ConfigurationError(MacFormatter.ERROR_INDEX_RANGE.format(index=index))
        return prefix + index.to_bytes(2, "big")
