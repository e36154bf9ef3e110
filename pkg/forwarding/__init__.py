"""Layer-2 data plane: learning bridges over Eo11 virtual links."""

from .bridge_table import BridgeTable, BridgeEntry
from .port_binding import PortBinding, PortKind
from .data_plane import DataPlane, FrameMeta, FrameSink, ForwardingCounters

__all__ = [
    "BridgeTable",
    "BridgeEntry",
    "PortBinding",
    "PortKind",
    "DataPlane",
    "FrameMeta",
    "FrameSink",
    "ForwardingCounters",
]
