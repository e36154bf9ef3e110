"""The GW's selfish channel choice: a deterministic stand-in for ACS."""

from __future__ import annotations

import logging
from collections.abc import Mapping

from models.channel_plan import Band, ChannelPlan
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def gw_select_channel(
    plan: ChannelPlan,
    configured: int | None = None,
    occupancy: Mapping[int, int] | None = None,
    band: Band = Band.BAND_24,
) -> int:
    """Configured channel if given, else the least-occupied channel of ``band``."""
    if configured is not None:
        if not plan.contains(configured):
            raise ConfigurationError(f"configured GW channel {configured} is not in the plan")
        return configured

    counts: Mapping[int, int] = occupancy or {}
    channel: int = min(plan.channels(band), key=lambda ch: (counts.get(ch, 0), ch))
    logger.debug("GW picked channel %d on %s GHz", channel, band.value)
    return channel
