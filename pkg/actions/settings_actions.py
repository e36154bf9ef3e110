"""Handles the config subcommand over the persisted user settings."""

from __future__ import annotations

import argparse
from typing import TYPE_CHECKING

from utils.settings_manager import SettingsManager

if TYPE_CHECKING:
    from main import WifixApp


class SettingsActions:
    """Show, change and reset persisted simulation defaults."""

    # ------------------------------------------------------------------
    # Constants
    # ------------------------------------------------------------------

    ROW_FORMAT: str = "{key:<40} {value}{marker}"
    CUSTOM_MARKER: str = "  (custom)"
    MSG_SET: str = "{key} = {value}"
    MSG_RESET_ALL: str = "all settings reset to defaults"
    MSG_RESET_CATEGORY: str = "{category} settings reset to defaults"

    # ------------------------------------------------------------------
    # Initialization
    # ------------------------------------------------------------------

    def __init__(self, app: WifixApp) -> None:
        self.app: WifixApp = app

    @property
    def settings(self) -> SettingsManager:
        return self.app.settings

    # ------------------------------------------------------------------
    # Settings Actions
    # ------------------------------------------------------------------

    def show(self, args: argparse.Namespace) -> int:
        for category, key, value, customized in self.settings.all_settings():
            self.app.print(
                self.ROW_FORMAT.format(
                    key=f"{category}.{key}",
                    value=value,
                    marker=self.CUSTOM_MARKER if customized else "",
                )
            )
        return 0

    def set(self, args: argparse.Namespace) -> int:
        category, key = SettingsManager.split_key(args.key)
        self.settings.set_setting(category, key, args.value)
        # Validate against the full constant set before persisting
        self.settings.simulation_constants()
        self.settings.save()
        self.app.print(self.MSG_SET.format(key=args.key, value=self.settings.get_setting(category, key)))
        return 0

    def reset(self, args: argparse.Namespace) -> int:
        if args.category is None:
            self.settings.reset_all_to_defaults()
            self.app.print(self.MSG_RESET_ALL)
        else:
            self.settings.reset_category_to_defaults(args.category)
            self.app.print(self.MSG_RESET_CATEGORY.format(category=args.category))
        return 0
