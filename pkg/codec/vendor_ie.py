"""Encoder/decoder for the WiFIX-DR vendor-specific information element.

Layout (one octet per cell)::

    221 | length | FF FE 00 | 01 | hops | ch1 ... chN

``length`` counts OUI, type, the hops octet (sitting where the standard puts a
subtype) and the channel list, so ``length = 5 + N`` and ``N <= 250``.
"""

from __future__ import annotations

from collections.abc import Sequence

from utils.errors import DecodeError, EncodeError


class VendorIECodec:
    """Pure functions over the WiFIX-DR vendor IE."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    ELEMENT_ID: int = 221
    OUI: bytes = b"\xff\xfe\x00"
    IE_TYPE: int = 0x01
    FIXED_CONTENT_LENGTH: int = 5
    MAX_LENGTH: int = 255
    MAX_CHANNELS: int = MAX_LENGTH - FIXED_CONTENT_LENGTH
    HEADER_LENGTH: int = 2

    ERROR_TOO_MANY: str = "{count} channels exceed the limit of {limit}"
    ERROR_CHANNEL: str = "channel {channel} outside 1..255"
    ERROR_HOPS: str = "hops {hops} outside 0..255"

    # ------------------------------------------------------------------
    # Encoding
    # ------------------------------------------------------------------

    @staticmethod
    def encode(hops: int, channels: Sequence[int]) -> bytes:
        """Return the full IE octets for a hop count and upstream channel list."""
        if not 0 <= hops <= 0xFF:
            raise EncodeError(VendorIECodec.ERROR_HOPS.format(hops=hops))
        if len(channels) > VendorIECodec.MAX_CHANNELS:
            raise EncodeError(
                VendorIECodec.ERROR_TOO_MANY.format(
                    count=len(channels), limit=VendorIECodec.MAX_CHANNELS
                )
            )
        for channel in channels:
            if not 1 <= channel <= 0xFF:
                raise EncodeError(VendorIECodec.ERROR_CHANNEL.format(channel=channel))

        length: int = VendorIECodec.FIXED_CONTENT_LENGTH + len(channels)
        return (
            bytes((VendorIECodec.ELEMENT_ID, length))
            + VendorIECodec.OUI
            + bytes((VendorIECodec.IE_TYPE, hops))
            + bytes(channels)
        )

    # ------------------------------------------------------------------
    # Decoding
    # ------------------------------------------------------------------

    @staticmethod
    def decode(octets: bytes) -> tuple[int, list[int]]:
        """Return ``(hops, channels)``; raises DecodeError naming the bad field."""
        data: bytes = bytes(octets)

        if len(data) < VendorIECodec.HEADER_LENGTH:
            raise DecodeError("length", f"truncated element ({len(data)} octets)")

        if data[0] != VendorIECodec.ELEMENT_ID:
            raise DecodeError("element_id", f"expected {VendorIECodec.ELEMENT_ID}, got {data[0]}")

        length: int = data[1]
        if length < VendorIECodec.FIXED_CONTENT_LENGTH:
            raise DecodeError("length", f"{length} is shorter than the fixed content")
        if len(data) != VendorIECodec.HEADER_LENGTH + length:
            raise DecodeError(
                "length", f"declares {length} content octets but {len(data) - 2} present"
            )

        oui: bytes = data[2:5]
        if oui != VendorIECodec.OUI:
            raise DecodeError("oui", f"foreign OUI {oui.hex('-').upper()}")

        if data[5] != VendorIECodec.IE_TYPE:
            raise DecodeError("ie_type", f"expected {VendorIECodec.IE_TYPE:02X}, got {data[5]:02X}")

        hops: int = data[6]
        channels: list[int] = list(data[7:])
        if 0 in channels:
            raise DecodeError("channel_list", "channel 0 is not a valid channel")

        return hops, channels


encode_vendor_ie = VendorIECodec.encode
decode_vendor_ie = VendorIECodec.decode
