"""DOWN-NIC channel assignment by weight reduction.

Every candidate starts at weight 1. Each occurrence of a candidate in the
parent's advertised channel list multiplies its weight by ``d_k / d_hops``,
where ``d_hops`` is the joining MAP's hop distance to the GW and ``d_k`` is the
hop distance from the joining MAP to the link using that channel. Channels used
close by are penalized hardest, so equal channels end up as far apart in the
tree as the band allows.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import ClassVar

from models.channel_plan import Band, ChannelPlan
from utils.errors import AssignmentError, ContractViolation


@dataclass
class WeightTable:
    """Per-candidate weights computed for a MAP at ``d_hops`` from the GW."""

    TOLERANCE: ClassVar[float] = 1e-12

    d_hops: int
    weights: dict[int, float] = field(default_factory=dict)

    def __getitem__(self, channel: int) -> float:
        return self.weights[channel]

    def as_rows(self) -> list[tuple[int, float]]:
        """(channel, weight) pairs in ascending channel order."""
        return sorted(self.weights.items())


# ------------------------------------------------------------------
# Candidate Set
# ------------------------------------------------------------------

def candidate_channels(parent_link_band: Band, plan: ChannelPlan) -> tuple[int, ...]:
    """All non-overlapping channels of the band the parent link does not use."""
    return plan.channels(parent_link_band.opposite)


# ------------------------------------------------------------------
# Weight Reduction
# ------------------------------------------------------------------

def apply_weight_reduction(
    d_hops: int,
    candidates: Sequence[int],
    parent_channel_list: Sequence[int],
) -> WeightTable:
    """Weigh ``candidates`` against the upstream channels advertised by the parent."""
    if d_hops < 1:
        raise ContractViolation(f"d_hops must be at least 1, got {d_hops}")
    if len(parent_channel_list) != d_hops - 1:
        raise ContractViolation(
            f"parent list of {len(parent_channel_list)} channels does not match d_hops={d_hops}"
        )

    table = WeightTable(d_hops=d_hops, weights={channel: 1.0 for channel in candidates})

    for index, channel in enumerate(parent_channel_list, start=1):
        if channel not in table.weights:
            continue
        d_k: int = d_hops - index
        if d_k < 1:
            raise ContractViolation(f"channel {channel} at index {index} gives d_k={d_k}")
        table.weights[channel] *= d_k / d_hops

    return table


# ------------------------------------------------------------------
# Selection
# ------------------------------------------------------------------

def assign_channel(weights: WeightTable, candidates: Sequence[int]) -> int:
    """Highest-weight candidate; ties go to the lowest channel number."""
    if not candidates:
        raise AssignmentError("no candidate channels to assign")

    best_channel: int | None = None
    best_weight: float = -1.0

    for channel in sorted(candidates):
        if channel not in weights.weights:
            raise ContractViolation(f"no weight for candidate channel {channel}")
        weight: float = weights.weights[channel]
        if weight > best_weight + WeightTable.TOLERANCE:
            best_channel = channel
            best_weight = weight

    assert best_channel is not None
    return best_channel
