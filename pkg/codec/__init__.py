"""Wire codecs: vendor IE, beacon body, Eo11 encapsulation and the baseline TR message."""

from .vendor_ie import VendorIECodec, encode_vendor_ie, decode_vendor_ie
from .beacon_codec import BeaconCodec, encode_beacon, decode_beacon
from .eo11_codec import (
    Eo11Codec,
    encode_ethernet,
    decode_ethernet,
    encode_eo11,
    decode_eo11,
    eo11_to_bytes,
    eo11_from_bytes,
)
from .tr_codec import TrCodec, encode_tr, decode_tr

__all__ = [
    "VendorIECodec",
    "encode_vendor_ie",
    "decode_vendor_ie",
    "BeaconCodec",
    "encode_beacon",
    "decode_beacon",
    "Eo11Codec",
    "encode_ethernet",
    "decode_ethernet",
    "encode_eo11",
    "decode_eo11",
    "eo11_to_bytes",
    "eo11_from_bytes",
    "TrCodec",
    "encode_tr",
    "decode_tr",
]
