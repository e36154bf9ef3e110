"""Data model for the per-band sets of non-overlapping channels."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar

from utils.errors import ConfigurationError


class Band(Enum):
    """Frequency bands a WiFIX-DR NIC can operate in."""

    BAND_24 = "2.4"
    BAND_5 = "5"

    @property
    def opposite(self) -> Band:
        """The other band (UP and DOWN NICs always differ)."""
        return Band.BAND_5 if self is Band.BAND_24 else Band.BAND_24

    @classmethod
    def parse(cls, text: str) -> Band:
        """Accept ``2.4``, ``2.4GHz``, ``5`` or ``5GHz``."""
        cleaned: str = text.strip().lower().removesuffix("ghz").strip()
        for band in cls:
            if band.value == cleaned:
                return band
        raise ConfigurationError(f"unknown band {text!r}")


@dataclass(frozen=True)
class ChannelPlan:
    """Ordered non-overlapping channels of each band plus channel→band lookup."""

    DEFAULT_BAND_24: ClassVar[tuple[int, ...]] = (1, 6, 11)
    DEFAULT_BAND_5: ClassVar[tuple[int, ...]] = (36, 40, 44, 48)

    ERROR_EMPTY: ClassVar[str] = "channel plan for {band} GHz is empty"
    ERROR_DUPLICATE: ClassVar[str] = "channel plan for {band} GHz repeats channel {channel}"
    ERROR_OVERLAP: ClassVar[str] = "channel {channel} appears in both bands"
    ERROR_RANGE: ClassVar[str] = "channel {channel} outside 1..255"

    band_24: tuple[int, ...] = DEFAULT_BAND_24
    band_5: tuple[int, ...] = DEFAULT_BAND_5
    _lookup: dict[int, Band] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "band_24", tuple(self.band_24))
        object.__setattr__(self, "band_5", tuple(self.band_5))

        lookup: dict[int, Band] = {}
        for band, channels in ((Band.BAND_24, self.band_24), (Band.BAND_5, self.band_5)):
            if not channels:
                raise ConfigurationError(self.ERROR_EMPTY.format(band=band.value))
            seen: set[int] = set()
            for channel in channels:
                if not 1 <= channel <= 255:
                    raise ConfigurationError(self.ERROR_RANGE.format(channel=channel))
                if channel in seen:
                    raise ConfigurationError(
                        self.ERROR_DUPLICATE.format(band=band.value, channel=channel)
                    )
                if channel in lookup:
                    raise ConfigurationError(self.ERROR_OVERLAP.format(channel=channel))
                seen.add(channel)
                lookup[channel] = band

        object.__setattr__(self, "_lookup", lookup)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def channels(self, band: Band) -> tuple[int, ...]:
        """Channels of ``band`` in plan order."""
        return self.band_24 if band is Band.BAND_24 else self.band_5

    def band_of(self, channel: int) -> Band | None:
        """Band a channel belongs to, or None if it is not in the plan."""
        return self._lookup.get(channel)

    def contains(self, channel: int) -> bool:
        """True if the channel is part of either band."""
        return channel in self._lookup

    @property
    def all_channels(self) -> tuple[int, ...]:
        """Every plan channel, 2.4 GHz first."""
        return self.band_24 + self.band_5
