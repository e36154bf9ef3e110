"""Active topology: parent selection, dual-radio join and the baseline TR agent."""

from .parent_selection import select_parent, parent_sort_key
from .tunnel_table import open_tunnel, close_tunnel
from .dual_radio_agent import DualRadioAgent, BeaconOutcome
from .tr_agent import BaselineTrAgent, TrOutcome

__all__ = [
    "select_parent",
    "parent_sort_key",
    "open_tunnel",
    "close_tunnel",
    "DualRadioAgent",
    "BeaconOutcome",
    "BaselineTrAgent",
    "TrOutcome",
]
