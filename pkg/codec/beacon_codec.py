"""Beacon frame body assembly and parsing (fixed fields, SSID, DS Parameter Set, vendor IE)."""

from __future__ import annotations

import struct

from codec.vendor_ie import VendorIECodec
from models.frames import Beacon
from utils.errors import DecodeError, EncodeError


class BeaconCodec:
    """Builds beacon bodies with the WiFIX-DR vendor IE as the last element."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    FIXED_FIELDS: struct.Struct = struct.Struct("<QHH")
    CAPABILITY_ESS: int = 0x0001
    DEFAULT_INTERVAL_TU: int = 100

    IE_SSID: int = 0
    IE_DS_PARAMETER_SET: int = 3
    MAX_SSID_LENGTH: int = 32

    ERROR_SSID: str = "SSID longer than {limit} octets"
    ERROR_HOPS_MISMATCH: str = "hops {hops} disagrees with {count} listed channels"
    ERROR_BODY_SIZE: str = "beacon body of {size} octets exceeds {limit}"
    ERROR_TIMESTAMP: str = "timestamp {timestamp} outside 0..2**64-1"
    ERROR_INTERVAL: str = "beacon interval {interval} TU outside 1..65535"
    ERROR_TX_CHANNEL: str = "transmit channel {channel} outside 1..255"

    # ------------------------------------------------------------------
    # Encoding
    # ------------------------------------------------------------------

    @staticmethod
    def encode(beacon: Beacon, interval_tu: int = DEFAULT_INTERVAL_TU) -> bytes:
        """Assemble a beacon body; the vendor IE always goes last."""
        if len(beacon.channel_list) != beacon.hops:
            raise EncodeError(
                BeaconCodec.ERROR_HOPS_MISMATCH.format(
                    hops=beacon.hops, count=len(beacon.channel_list)
                )
            )

        if not 0 <= beacon.timestamp < 1 << 64:
            raise EncodeError(BeaconCodec.ERROR_TIMESTAMP.format(timestamp=beacon.timestamp))
        if not 1 <= interval_tu <= 0xFFFF:
            raise EncodeError(BeaconCodec.ERROR_INTERVAL.format(interval=interval_tu))
        if not 1 <= beacon.tx_channel <= 0xFF:
            raise EncodeError(BeaconCodec.ERROR_TX_CHANNEL.format(channel=beacon.tx_channel))

        ssid: bytes = beacon.ssid.encode("utf-8")
        if len(ssid) > BeaconCodec.MAX_SSID_LENGTH:
            raise EncodeError(BeaconCodec.ERROR_SSID.format(limit=BeaconCodec.MAX_SSID_LENGTH))

        body: bytes = (
            BeaconCodec.FIXED_FIELDS.pack(beacon.timestamp, interval_tu, BeaconCodec.CAPABILITY_ESS)
            + bytes((BeaconCodec.IE_SSID, len(ssid)))
            + ssid
            + bytes((BeaconCodec.IE_DS_PARAMETER_SET, 1, beacon.tx_channel))
            + VendorIECodec.encode(beacon.hops, beacon.channel_list)
        )

        if len(body) > Beacon.MAX_BODY_LENGTH:
            raise EncodeError(
                BeaconCodec.ERROR_BODY_SIZE.format(size=len(body), limit=Beacon.MAX_BODY_LENGTH)
            )
        return body

    # ------------------------------------------------------------------
    # Decoding
    # ------------------------------------------------------------------

    @staticmethod
    def decode(body: bytes, bssid: bytes) -> Beacon:
        """Parse a beacon body heard from ``bssid``; raises DecodeError if it is not WiFIX-DR."""
        if len(body) > Beacon.MAX_BODY_LENGTH:
            raise DecodeError("body", f"{len(body)} octets exceed {Beacon.MAX_BODY_LENGTH}")
        if len(body) < BeaconCodec.FIXED_FIELDS.size:
            raise DecodeError("fixed_fields", "truncated")

        timestamp, _interval, _capability = BeaconCodec.FIXED_FIELDS.unpack_from(body)

        ssid: str = ""
        tx_channel: int = 0
        vendor_element: bytes | None = None
        offset: int = BeaconCodec.FIXED_FIELDS.size

        while offset < len(body):
            if offset + 2 > len(body):
                raise DecodeError("ie", f"truncated element header at offset {offset}")
            element_id: int = body[offset]
            length: int = body[offset + 1]
            end: int = offset + 2 + length
            if end > len(body):
                raise DecodeError("ie", f"element {element_id} overruns the body")

            content: bytes = body[offset + 2:end]
            if element_id == BeaconCodec.IE_SSID:
                ssid = content.decode("utf-8", errors="replace")
            elif element_id == BeaconCodec.IE_DS_PARAMETER_SET and length == 1:
                tx_channel = content[0]
            elif element_id == VendorIECodec.ELEMENT_ID and content[:3] == VendorIECodec.OUI:
                vendor_element = body[offset:end]

            offset = end

        if vendor_element is None:
            raise DecodeError("vendor_ie", "no WiFIX-DR vendor IE in the body")

        hops, channels = VendorIECodec.decode(vendor_element)
        if hops != len(channels):
            raise DecodeError("hops", BeaconCodec.ERROR_HOPS_MISMATCH.format(hops=hops, count=len(channels)))

        return Beacon(
            bssid=bytes(bssid),
            hops=hops,
            channel_list=tuple(channels),
            tx_channel=tx_channel,
            ssid=ssid,
            timestamp=timestamp,
        )


encode_beacon = BeaconCodec.encode
decode_beacon = BeaconCodec.decode
