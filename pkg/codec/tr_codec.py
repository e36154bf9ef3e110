"""Fixed-width wire form of the baseline Topology Refresh message.

``hops`` (1 octet) | ``parent_addr`` (6) | ``origin_addr`` (6)
"""

from __future__ import annotations

from models.frames import TrMessage
from utils.errors import DecodeError, EncodeError


class TrCodec:
    """Encode and decode TR messages."""

    ERROR_HOPS: str = "hops {hops} outside 0..255"
    ERROR_MAC: str = "{field} must be 6 octets"

    @staticmethod
    def encode(message: TrMessage) -> bytes:
        """Serialize a TR message to its 13 octets."""
        if not 0 <= message.hops <= 0xFF:
            raise EncodeError(TrCodec.ERROR_HOPS.format(hops=message.hops))
        for field, mac in (("parent_addr", message.parent_addr), ("origin_addr", message.origin_addr)):
            if len(mac) != 6:
                raise EncodeError(TrCodec.ERROR_MAC.format(field=field))
        return bytes((message.hops,)) + message.parent_addr + message.origin_addr

    @staticmethod
    def decode(octets: bytes) -> TrMessage:
        """Parse exactly 13 octets into a TR message."""
        if len(octets) != TrMessage.WIRE_LENGTH:
            raise DecodeError("length", f"expected {TrMessage.WIRE_LENGTH} octets, got {len(octets)}")
        return TrMessage(
            hops=octets[0],
            parent_addr=bytes(octets[1:7]),
            origin_addr=bytes(octets[7:13]),
        )


encode_tr = TrCodec.encode
decode_tr = TrCodec.decode
