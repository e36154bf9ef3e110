"""Ethernet and Eo11 (Ethernet over 802.11) encapsulation."""

from __future__ import annotations

from models.frames import Eo11Frame, EthernetFrame
from utils.errors import DecodeError, EncodeError


class Eo11Codec:
    """Wraps inner Ethernet frames in a 14-octet hop-by-hop outer header."""

    MAC_LENGTH: int = 6
    ERROR_MAC: str = "{field} must be {length} octets"
    ERROR_ETHERTYPE: str = "ethertype {value:#x} outside 0..0xffff"

    # ------------------------------------------------------------------
    # Inner Ethernet Frames
    # ------------------------------------------------------------------

    @staticmethod
    def encode_ethernet(frame: EthernetFrame) -> bytes:
        """Serialize an inner Ethernet frame."""
        Eo11Codec._check_mac("dst", frame.dst)
        Eo11Codec._check_mac("src", frame.src)
        if not 0 <= frame.ethertype <= 0xFFFF:
            raise EncodeError(Eo11Codec.ERROR_ETHERTYPE.format(value=frame.ethertype))
        return frame.dst + frame.src + frame.ethertype.to_bytes(2, "big") + frame.payload

    @staticmethod
    def decode_ethernet(data: bytes) -> EthernetFrame:
        """Parse an inner Ethernet frame."""
        if len(data) < EthernetFrame.HEADER_LENGTH:
            raise DecodeError("inner_header", f"truncated ({len(data)} octets)")
        return EthernetFrame(
            dst=bytes(data[0:6]),
            src=bytes(data[6:12]),
            ethertype=int.from_bytes(data[12:14], "big"),
            payload=bytes(data[14:]),
        )

    # ------------------------------------------------------------------
    # Encapsulation
    # ------------------------------------------------------------------

    @staticmethod
    def encode(inner: EthernetFrame, next_hop: bytes, self_mac: bytes) -> Eo11Frame:
        """Wrap ``inner`` for the virtual link ``self_mac`` → ``next_hop``."""
        Eo11Codec._check_mac("next_hop", next_hop)
        Eo11Codec._check_mac("self_mac", self_mac)
        return Eo11Frame(outer_dst=next_hop, outer_src=self_mac, inner=inner)

    @staticmethod
    def decode(frame: Eo11Frame) -> EthernetFrame:
        """Strip the outer header and return the inner frame."""
        if frame.outer_ethertype != Eo11Frame.ETHERTYPE:
            raise DecodeError("outer_ethertype", f"{frame.outer_ethertype:#06x} is not Eo11")
        return frame.inner

    # ------------------------------------------------------------------
    # Wire Form
    # ------------------------------------------------------------------

    @staticmethod
    def to_bytes(frame: Eo11Frame) -> bytes:
        """Outer header followed by the inner frame octets."""
        return (
            frame.outer_dst
            + frame.outer_src
            + frame.outer_ethertype.to_bytes(2, "big")
            + Eo11Codec.encode_ethernet(frame.inner)
        )

    @staticmethod
    def from_bytes(data: bytes) -> Eo11Frame:
        """Parse outer header and inner frame; rejects truncation and foreign ethertypes."""
        if len(data) < Eo11Frame.HEADER_LENGTH:
            raise DecodeError("outer_header", f"truncated ({len(data)} octets)")

        ethertype: int = int.from_bytes(data[12:14], "big")
        if ethertype != Eo11Frame.ETHERTYPE:
            raise DecodeError("outer_ethertype", f"{ethertype:#06x} is not Eo11")

        return Eo11Frame(
            outer_dst=bytes(data[0:6]),
            outer_src=bytes(data[6:12]),
            inner=Eo11Codec.decode_ethernet(data[Eo11Frame.HEADER_LENGTH:]),
            outer_ethertype=ethertype,
        )

    @staticmethod
    def _check_mac(field: str, mac: bytes) -> None:
        if len(mac) != Eo11Codec.MAC_LENGTH:
            raise EncodeError(Eo11Codec.ERROR_MAC.format(field=field, length=Eo11Codec.MAC_LENGTH))


encode_ethernet = Eo11Codec.encode_ethernet
decode_ethernet = Eo11Codec.decode_ethernet
encode_eo11 = Eo11Codec.encode
decode_eo11 = Eo11Codec.decode
eo11_to_bytes = Eo11Codec.to_bytes
eo11_from_bytes = Eo11Codec.from_bytes
