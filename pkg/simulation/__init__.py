"""Discrete-event medium simulation: airtime, conflicts, arbitration and the network loop."""

from .airtime import AirtimeConstants, airtime, airtime_us, saturation_throughput_mbps
from .conflict_graph import ConflictGraph, Transmission, conflicts
from .event_queue import EventQueue, SimEvent, SimEventKind
from .medium import AirFrame, AirFrameKind, Contender, Medium, Transmitter, TxLogEntry, arbitrate
from .trace import EventTrace

__all__ = [
    "AirtimeConstants",
    "airtime",
    "airtime_us",
    "saturation_throughput_mbps",
    "ConflictGraph",
    "Transmission",
    "conflicts",
    "EventQueue",
    "SimEvent",
    "SimEventKind",
    "AirFrame",
    "AirFrameKind",
    "Contender",
    "Medium",
    "Transmitter",
    "TxLogEntry",
    "arbitrate",
    "EventTrace",
]
