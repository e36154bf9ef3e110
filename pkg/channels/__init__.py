"""Channel assignment: candidate sets, weight reduction and the GW's channel choice."""

from .weight_reduction import (
    WeightTable,
    candidate_channels,
    apply_weight_reduction,
    assign_channel,
)
from .gw_selection import gw_select_channel

__all__ = [
    "WeightTable",
    "candidate_channels",
    "apply_weight_reduction",
    "assign_channel",
    "gw_select_channel",
]
