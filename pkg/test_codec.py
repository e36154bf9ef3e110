"""Wire codec tests: golden bytes, round trips and fuzzed input."""

from __future__ import annotations

import numpy as np
import pytest

from codec import BeaconCodec, Eo11Codec, TrCodec, VendorIECodec
from models.frames import Beacon, Eo11Frame, EthernetFrame, TrMessage
from utils.errors import DecodeError, EncodeError
from utils.mac_formatter import MacFormatter

ROUND_TRIPS: int = 10_000


def _hex(text: str) -> bytes:
    return bytes.fromhex(text.replace(" ", ""))


def _random_mac(rng: np.random.Generator) -> bytes:
    return bytes(rng.integers(0, 256, size=6, dtype=np.uint8))


class TestGoldenVectors:
    def test_vendor_ie_vectors(self, golden_vectors):
        rows = [row for row in golden_vectors if row[0] == "vendor_ie"]
        assert len(rows) == 3
        for _, arguments, octets in rows:
            hops_text, _, channels_text = arguments.partition(";")
            hops = int(hops_text)
            channels = [int(item) for item in channels_text.split(",") if item.strip()]
            assert VendorIECodec.encode(hops, channels) == _hex(octets)
            assert VendorIECodec.decode(_hex(octets)) == (hops, channels)

    def test_vendor_ie_error_vectors_name_the_field(self, golden_vectors):
        rows = [row for row in golden_vectors if row[0] == "vendor_ie_error"]
        assert rows
        for _, _, octets, field in rows:
            with pytest.raises(DecodeError) as raised:
                VendorIECodec.decode(_hex(octets))
            assert raised.value.field == field

    def test_tr_vectors(self, golden_vectors):
        for _, arguments, octets in (row for row in golden_vectors if row[0] == "tr"):
            hops, parent, origin = (item.strip() for item in arguments.split(";"))
            message = TrMessage(int(hops), MacFormatter.parse(parent), MacFormatter.parse(origin))
            assert TrCodec.encode(message) == _hex(octets)
            assert TrCodec.decode(_hex(octets)) == message


class TestVendorIE:
    def test_length_is_seven_plus_channels(self):
        for count in (0, 1, 17, 250):
            octets = VendorIECodec.encode(count % 256, [1] * count)
            assert len(octets) == 7 + count
            assert octets[1] == len(octets) - 2

    def test_oversize_channel_list_rejected(self):
        with pytest.raises(EncodeError):
            VendorIECodec.encode(251, [1] * 251)

    @pytest.mark.parametrize("channel", [0, 256, -1])
    def test_channel_out_of_range_rejected(self, channel):
        with pytest.raises(EncodeError):
            VendorIECodec.encode(1, [channel])

    def test_foreign_oui(self):
        with pytest.raises(DecodeError) as raised:
            VendorIECodec.decode(_hex("DD 05 AA BB CC 01 00"))
        assert raised.value.field == "oui"

    def test_round_trips(self):
        rng = np.random.default_rng(7)
        for _ in range(ROUND_TRIPS):
            count = int(rng.integers(0, 251))
            hops = int(rng.integers(0, 256))
            channels = [int(value) for value in rng.integers(1, 256, size=count)]
            assert VendorIECodec.decode(VendorIECodec.encode(hops, channels)) == (hops, channels)


class TestBeacon:
    def test_vendor_ie_is_last(self):
        beacon = Beacon(MacFormatter.node_mac(2), 2, (6, 36), tx_channel=1)
        body = BeaconCodec.encode(beacon)
        assert body.endswith(VendorIECodec.encode(2, [6, 36]))

    def test_round_trip(self):
        beacon = Beacon(MacFormatter.node_mac(3), 1, (6,), tx_channel=36, timestamp=123456)
        assert BeaconCodec.decode(BeaconCodec.encode(beacon), beacon.bssid) == beacon

    def test_hops_must_match_channel_list(self):
        with pytest.raises(EncodeError):
            BeaconCodec.encode(Beacon(MacFormatter.node_mac(2), 2, (6,)))

    @pytest.mark.parametrize(
        ("beacon", "interval_tu"),
        [
            (Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=256), 100),
            (Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=0), 100),
            (Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=6, timestamp=-1), 100),
            (Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=6, timestamp=1 << 64), 100),
            (Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=6), 0x10000),
        ],
    )
    def test_unrepresentable_fields(self, beacon, interval_tu):
        with pytest.raises(EncodeError):
            BeaconCodec.encode(beacon, interval_tu)

    def test_unknown_elements_are_skipped(self):
        beacon = Beacon(MacFormatter.node_mac(2), 1, (6,), tx_channel=40)
        body = BeaconCodec.encode(beacon)
        foreign_vendor = _hex("DD 05 00 50 F2 02 01")
        rsn = _hex("30 02 01 00")
        decoded = BeaconCodec.decode(body + rsn + foreign_vendor, beacon.bssid)
        assert decoded == beacon

    def test_last_vendor_ie_wins(self):
        beacon = Beacon(MacFormatter.node_mac(2), 0, (), tx_channel=6)
        body = BeaconCodec.encode(beacon) + VendorIECodec.encode(1, [11])
        decoded = BeaconCodec.decode(body, beacon.bssid)
        assert (decoded.hops, decoded.channel_list) == (1, (11,))

    def test_missing_vendor_ie(self):
        body = BeaconCodec.FIXED_FIELDS.pack(0, 100, 1) + _hex("00 00")
        with pytest.raises(DecodeError) as raised:
            BeaconCodec.decode(body, MacFormatter.node_mac(1))
        assert raised.value.field == "vendor_ie"

    def test_oversized_body_rejected(self):
        body = BeaconCodec.FIXED_FIELDS.pack(0, 100, 1) + bytes(Beacon.MAX_BODY_LENGTH)
        with pytest.raises(DecodeError):
            BeaconCodec.decode(body, MacFormatter.node_mac(1))


class TestEo11:
    def test_wrap_sets_outer_header(self):
        inner = EthernetFrame(MacFormatter.host_mac(2), MacFormatter.host_mac(1), 0x0800, bytes(100))
        m1, m2 = MacFormatter.node_mac(1), MacFormatter.node_mac(2)
        frame = Eo11Codec.encode(inner, next_hop=m2, self_mac=m1)
        assert (frame.outer_dst, frame.outer_src, frame.outer_ethertype) == (m2, m1, 0x88B5)
        assert Eo11Codec.decode(frame) == inner

    def test_relay_rewrites_only_the_outer_header(self):
        inner = EthernetFrame(MacFormatter.host_mac(2), MacFormatter.host_mac(1), 0x0800, b"abc")
        m1, m2, m3 = (MacFormatter.node_mac(index) for index in (1, 2, 3))
        first = Eo11Codec.to_bytes(Eo11Codec.encode(inner, m2, m1))
        at_m2 = Eo11Codec.decode(Eo11Codec.from_bytes(first))
        second = Eo11Codec.from_bytes(Eo11Codec.to_bytes(Eo11Codec.encode(at_m2, m3, m2)))
        assert (second.outer_dst, second.outer_src) == (m3, m2)
        assert first[Eo11Frame.HEADER_LENGTH:] == Eo11Codec.to_bytes(second)[Eo11Frame.HEADER_LENGTH:]

    def test_wrong_ethertype(self):
        data = bytes(12) + b"\x08\x00" + bytes(14)
        with pytest.raises(DecodeError) as raised:
            Eo11Codec.from_bytes(data)
        assert raised.value.field == "outer_ethertype"

    def test_truncated(self):
        with pytest.raises(DecodeError):
            Eo11Codec.from_bytes(bytes(10))

    def test_round_trips(self):
        rng = np.random.default_rng(11)
        for _ in range(ROUND_TRIPS):
            inner = EthernetFrame(
                _random_mac(rng),
                _random_mac(rng),
                int(rng.integers(0, 0x10000)),
                bytes(rng.integers(0, 256, size=int(rng.integers(0, 64)), dtype=np.uint8)),
            )
            frame = Eo11Codec.encode(inner, _random_mac(rng), _random_mac(rng))
            assert Eo11Codec.from_bytes(Eo11Codec.to_bytes(frame)) == frame


class TestTr:
    def test_hops_boundary(self):
        message = TrMessage(255, MacFormatter.node_mac(2), MacFormatter.node_mac(1))
        assert TrCodec.decode(TrCodec.encode(message)) == message

    def test_short_buffer(self):
        with pytest.raises(DecodeError):
            TrCodec.decode(bytes(12))

    def test_round_trips(self):
        rng = np.random.default_rng(13)
        for _ in range(ROUND_TRIPS):
            message = TrMessage(int(rng.integers(0, 256)), _random_mac(rng), _random_mac(rng))
            assert TrCodec.decode(TrCodec.encode(message)) == message


class TestFuzz:
    DECODERS = (
        VendorIECodec.decode,
        TrCodec.decode,
        Eo11Codec.from_bytes,
        lambda data: BeaconCodec.decode(data, MacFormatter.node_mac(1)),
    )

    def test_decoders_only_raise_decode_error(self):
        rng = np.random.default_rng(17)
        for _ in range(ROUND_TRIPS):
            size = int(rng.integers(0, 80))
            data = bytes(rng.integers(0, 256, size=size, dtype=np.uint8))
            if size > 1 and rng.random() < 0.5:
                data = b"\xdd" + data[1:]
            for decode in self.DECODERS:
                try:
                    decode(data)
                except DecodeError:
                    pass
