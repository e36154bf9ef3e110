"""Persisted simulation defaults backed by an INI file."""

from __future__ import annotations

import pytest

from utils.errors import ConfigurationError
from utils.settings_manager import SettingsManager


class TestSettingsManager:
    def test_defaults(self, settings_ini):
        settings = SettingsManager(settings_ini)
        assert settings.get_setting("medium", "queue_depth") == 100
        assert settings.get_setting("topology", "beacon_interval_ms") == 100.0
        assert settings.run_defaults() == {"seed": 1, "duration_s": 60.0, "repetitions": 1}
        assert not any(customized for *_, customized in settings.all_settings())

    def test_saved_values_survive_reload(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("medium", "queue_depth", "50")
        settings.set_setting("experiment", "duration_s", "2.5")
        settings.save()

        reloaded = SettingsManager(settings_ini)
        assert reloaded.get_setting("medium", "queue_depth") == 50
        assert reloaded.get_setting("experiment", "duration_s") == 2.5

    def test_values_equal_to_defaults_are_not_written(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("medium", "queue_depth", 100)
        settings.save()
        settings.qsettings.beginGroup("medium")
        try:
            assert not settings.qsettings.contains("queue_depth")
        finally:
            settings.qsettings.endGroup()

    def test_overrides_reach_the_simulation_constants(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("topology", "beacon_interval_ms", "50")
        settings.set_setting("medium", "interference_hops", "2")
        constants = settings.simulation_constants()
        assert constants.beacon_interval_us == 50_000
        assert constants.interference_hops == 2

    def test_run_keys_stay_out_of_the_constants(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("experiment", "seed", "7")
        settings.simulation_constants()
        assert settings.run_defaults()["seed"] == 7

    @pytest.mark.parametrize(
        ("category", "key", "value"),
        [
            ("medium", "queue_depth", "lots"),
            ("medium", "queue_depth", "2.5"),
            ("topology", "beacon_interval_ms", "fast"),
        ],
    )
    def test_bad_values(self, settings_ini, category, key, value):
        with pytest.raises(ConfigurationError):
            SettingsManager(settings_ini).set_setting(category, key, value)

    def test_unknown_names(self, settings_ini):
        settings = SettingsManager(settings_ini)
        with pytest.raises(ConfigurationError):
            settings.get_setting("radio", "power")
        with pytest.raises(ConfigurationError):
            settings.set_setting("medium", "power", 1)
        with pytest.raises(ConfigurationError):
            SettingsManager.split_key("medium")
        assert SettingsManager.split_key("medium.queue_depth") == ("medium", "queue_depth")

    def test_non_positive_override_is_rejected_by_the_constants(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("medium", "queue_depth", 0)
        with pytest.raises(ConfigurationError):
            settings.simulation_constants()

    def test_discard_changes(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("medium", "queue_depth", 10)
        settings.discard_changes()
        assert settings.get_setting("medium", "queue_depth") == 100

    def test_reset_category(self, settings_ini):
        settings = SettingsManager(settings_ini)
        settings.set_setting("medium", "queue_depth", 10)
        settings.set_setting("topology", "beacon_loss_threshold", 5)
        settings.save()

        settings.reset_category_to_defaults("medium")
        reloaded = SettingsManager(settings_ini)
        assert reloaded.get_setting("medium", "queue_depth") == 100
        assert reloaded.get_setting("topology", "beacon_loss_threshold") == 5

        reloaded.reset_all_to_defaults()
        assert SettingsManager(settings_ini).get_setting("topology", "beacon_loss_threshold") == 3
