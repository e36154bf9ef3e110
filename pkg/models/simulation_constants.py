"""Tunable constants of one simulation run."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, ClassVar

from simulation.airtime import AirtimeConstants
from utils.errors import ConfigurationError


@dataclass(frozen=True)
class SimulationConstants:
    """Timing, queueing and protocol constants; every field can be overridden by name."""

    ERROR_UNKNOWN: ClassVar[str] = "unknown constant {name!r}"
    ERROR_VALUE: ClassVar[str] = "constant {name} expects {kind}, got {value!r}"
    ERROR_RANGE: ClassVar[str] = "constant {name} must be positive, got {value}"

    # medium
    slot_us: float = 9.0
    sifs_us: float = 16.0
    difs_us: float = 34.0
    cw_min: int = 15
    plcp_us: float = 20.0
    data_rate_mbps: float = 54.0
    control_rate_mbps: float = 24.0
    ack_size: int = 14
    mac_overhead: int = 28
    queue_depth: int = 100
    interference_hops: int = 1

    # topology
    beacon_interval_ms: float = 100.0
    association_latency_ms: float = 10.0
    beacon_loss_threshold: int = 3
    candidate_expiry_ms: float = 300.0
    scan_slack_ms: float = 1.0
    tr_period_ms: float = 1000.0

    # forwarding
    bridge_aging_s: float = 300.0

    # experiment
    convergence_quiet_intervals: int = 5
    convergence_timeout_s: float = 30.0
    traffic_start_delay_ms: float = 100.0

    def __post_init__(self) -> None:
        for spec in fields(self):
            value = getattr(self, spec.name)
            if value <= 0:
                raise ConfigurationError(self.ERROR_RANGE.format(name=spec.name, value=value))

    # ------------------------------------------------------------------
    # Derived Values
    # ------------------------------------------------------------------

    @property
    def airtime(self) -> AirtimeConstants:
        """The PHY/MAC subset used for airtime."""
        return AirtimeConstants(
            slot_us=self.slot_us,
            sifs_us=self.sifs_us,
            difs_us=self.difs_us,
            cw_min=self.cw_min,
            plcp_us=self.plcp_us,
            data_rate_mbps=self.data_rate_mbps,
            control_rate_mbps=self.control_rate_mbps,
            ack_size=self.ack_size,
            mac_overhead=self.mac_overhead,
        )

    @property
    def beacon_interval_us(self) -> int:
        return round(self.beacon_interval_ms * 1000)

    @property
    def association_latency_us(self) -> int:
        return round(self.association_latency_ms * 1000)

    @property
    def candidate_expiry_us(self) -> int:
        return round(self.candidate_expiry_ms * 1000)

    @property
    def scan_slack_us(self) -> int:
        return round(self.scan_slack_ms * 1000)

    @property
    def tr_period_us(self) -> int:
        return round(self.tr_period_ms * 1000)

    @property
    def bridge_aging_us(self) -> int:
        return round(self.bridge_aging_s * 1_000_000)

    @property
    def convergence_timeout_us(self) -> int:
        return round(self.convergence_timeout_s * 1_000_000)

    @property
    def traffic_start_delay_us(self) -> int:
        return round(self.traffic_start_delay_ms * 1000)

    # ------------------------------------------------------------------
    # Overrides
    # ------------------------------------------------------------------

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(spec.name for spec in fields(cls))

    def with_overrides(self, overrides: Mapping[str, Any]) -> SimulationConstants:
        """Copy with ``overrides`` applied; string values are coerced to the field type."""
        if not overrides:
            return self

        defaults: dict[str, Any] = asdict(self)
        changes: dict[str, Any] = {}
        for name, value in overrides.items():
            if name not in defaults:
                raise ConfigurationError(self.ERROR_UNKNOWN.format(name=name))
            changes[name] = self.coerce(name, value, type(defaults[name]))
        return replace(self, **changes)

    @classmethod
    def coerce(cls, name: str, value: Any, kind: type) -> Any:
        """Convert ``value`` to int or float as the field requires."""
        try:
            if kind is int:
                number = float(value)
                if not number.is_integer():
                    raise ValueError(value)
                return int(number)
            return float(value)
        except (TypeError, ValueError):
            raise ConfigurationError(
                cls.ERROR_VALUE.format(name=name, kind=kind.__name__, value=value)
            ) from None
