"""User-level simulation defaults and disk persistence."""

from __future__ import annotations

from typing import Any

from PySide6.QtCore import QSettings

from models.simulation_constants import SimulationConstants
from utils.errors import ConfigurationError


class SettingsManager:
    """Manages persisted overrides of the built-in simulation defaults."""

    ORGANIZATION: str = "WiFIX"
    APPLICATION: str = "WiFIXDR"

    ERROR_UNKNOWN_CATEGORY: str = "unknown settings category {category!r}"
    ERROR_UNKNOWN_KEY: str = "unknown setting {category}.{key}"
    ERROR_BAD_KEY: str = "settings key must look like category.key, got {text!r}"
    ERROR_BAD_VALUE: str = "setting {category}.{key} expects {kind}, got {value!r}"

    DEFAULTS: dict[str, dict[str, Any]] = {
        "medium": {
            # PHY/MAC timing
            "slot_us": 9.0,
            "sifs_us": 16.0,
            "difs_us": 34.0,
            "cw_min": 15,
            "plcp_us": 20.0,
            "data_rate_mbps": 54.0,
            "control_rate_mbps": 24.0,
            "ack_size": 14,
            "mac_overhead": 28,

            # Queues and interference
            "queue_depth": 100,
            "interference_hops": 1,
        },

        "topology": {
            "beacon_interval_ms": 100.0,
            "association_latency_ms": 10.0,
            "beacon_loss_threshold": 3,
            "candidate_expiry_ms": 300.0,
            "scan_slack_ms": 1.0,
            "tr_period_ms": 1000.0,
        },

        "forwarding": {
            "bridge_aging_s": 300.0,
        },

        "experiment": {
            "convergence_quiet_intervals": 5,
            "convergence_timeout_s": 30.0,
            "traffic_start_delay_ms": 100.0,

            # Run defaults applied when a scenario leaves them out
            "seed": 1,
            "duration_s": 60.0,
            "repetitions": 1,
        },
    }

    RUN_KEYS: tuple[str, ...] = ("seed", "duration_s", "repetitions")

    def __init__(self, ini_path: str | None = None) -> None:
        """Load user settings from the platform store, or from an INI file when given."""
        if ini_path is None:
            self.qsettings = QSettings(self.ORGANIZATION, self.APPLICATION)
        else:
            self.qsettings = QSettings(ini_path, QSettings.Format.IniFormat)

        self.custom: dict[str, dict[str, Any]] = {category: {} for category in self.DEFAULTS}
        self._load_from_disk()

    # ------------------------------------------------------------------
    # Helper Methods
    # ------------------------------------------------------------------

    def _get_custom_dict(self, category: str) -> dict[str, Any]:
        """Get the custom dictionary for a given category."""
        if category not in self.custom:
            raise ConfigurationError(self.ERROR_UNKNOWN_CATEGORY.format(category=category))
        return self.custom[category]

    def _coerce(self, category: str, key: str, value: Any) -> Any:
        """Convert a stored or typed value to the type of its default."""
        default: Any = self.DEFAULTS[category][key]
        kind: type = type(default)
        try:
            if kind is int:
                number = float(value)
                if not number.is_integer():
                    raise ValueError(value)
                return int(number)
            return kind(value)
        except (TypeError, ValueError):
            raise ConfigurationError(
                self.ERROR_BAD_VALUE.format(
                    category=category, key=key, kind=kind.__name__, value=value
                )
            ) from None

    def _load_from_disk(self) -> None:
        """Load user's saved settings from disk."""
        for category in self.DEFAULTS.keys():
            self.qsettings.beginGroup(category)
            custom_dict = self._get_custom_dict(category)

            for key in self.DEFAULTS[category].keys():
                if self.qsettings.contains(key):
                    custom_dict[key] = self._coerce(category, key, self.qsettings.value(key))

            self.qsettings.endGroup()

    def _save_to_disk(self) -> None:
        """Save user's custom settings to disk."""
        for category in self.DEFAULTS.keys():
            # Clear existing category on disk
            self.qsettings.beginGroup(category)
            self.qsettings.remove("")
            self.qsettings.endGroup()

            # Save only settings that differ from the defaults
            self.qsettings.beginGroup(category)
            custom_dict = self._get_custom_dict(category)

            for key in self.DEFAULTS[category].keys():
                if key in custom_dict and custom_dict[key] != self.DEFAULTS[category][key]:
                    self.qsettings.setValue(key, custom_dict[key])

            self.qsettings.endGroup()

        self.qsettings.sync()

    @classmethod
    def split_key(cls, text: str) -> tuple[str, str]:
        """``medium.queue_depth`` → ("medium", "queue_depth")."""
        category, _, key = text.partition(".")
        if not category or not key:
            raise ConfigurationError(cls.ERROR_BAD_KEY.format(text=text))
        return category, key

    # ------------------------------------------------------------------
    # Generic Settings Operations
    # ------------------------------------------------------------------

    def get_setting(self, category: str, key: str) -> Any:
        """Get setting from any category, checking custom then default."""
        custom_dict = self._get_custom_dict(category)
        if key not in self.DEFAULTS[category]:
            raise ConfigurationError(self.ERROR_UNKNOWN_KEY.format(category=category, key=key))
        return custom_dict.get(key, self.DEFAULTS[category][key])

    def set_setting(self, category: str, key: str, value: Any) -> None:
        """Set setting in any category (memory only, not saved to disk)."""
        custom_dict = self._get_custom_dict(category)
        if key not in self.DEFAULTS[category]:
            raise ConfigurationError(self.ERROR_UNKNOWN_KEY.format(category=category, key=key))
        custom_dict[key] = self._coerce(category, key, value)

    def all_settings(self) -> list[tuple[str, str, Any, bool]]:
        """(category, key, effective value, customized) for every known setting."""
        rows: list[tuple[str, str, Any, bool]] = []
        for category, defaults in self.DEFAULTS.items():
            for key in defaults:
                value = self.get_setting(category, key)
                rows.append((category, key, value, value != defaults[key]))
        return rows

    # ------------------------------------------------------------------
    # Simulation Defaults
    # ------------------------------------------------------------------

    def simulation_constants(self) -> SimulationConstants:
        """Built-in constants with every persisted override applied."""
        overrides: dict[str, Any] = {}
        for category, defaults in self.DEFAULTS.items():
            for key in defaults:
                if key in self.RUN_KEYS:
                    continue
                overrides[key] = self.get_setting(category, key)
        return SimulationConstants().with_overrides(overrides)

    def run_defaults(self) -> dict[str, Any]:
        """Seed, duration and repetitions used when a scenario does not set them."""
        return {key: self.get_setting("experiment", key) for key in self.RUN_KEYS}

    # ------------------------------------------------------------------
    # Save/Discard/Reset Operations
    # ------------------------------------------------------------------

    def save(self) -> None:
        """Save all custom settings to disk."""
        self._save_to_disk()

    def discard_changes(self) -> None:
        """Discard unsaved changes by reloading from disk."""
        for custom_dict in self.custom.values():
            custom_dict.clear()
        self._load_from_disk()

    def reset_category_to_defaults(self, category: str) -> None:
        """Reset one category to defaults and save to disk."""
        custom_dict = self._get_custom_dict(category)
        custom_dict.clear()
        self._save_to_disk()

    def reset_all_to_defaults(self) -> None:
        """Reset all categories to defaults and save to disk."""
        for category in self.DEFAULTS.keys():
            self.reset_category_to_defaults(category)
