"""
Tests for layered run settings.
"""
import json
import logging

import pytest

from roadseg.config import (
    CLEAN_TIMESTEP,
    PRESETS,
    clean_timestep,
    log_level,
    resolve_settings,
)
from roadseg.core.errors import ConfigurationError


class TestResolveSettings:
    """Tests for resolve_settings."""

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("ROADSEG_DEVICE", raising=False)
        settings = resolve_settings()
        assert settings.variant == "unet_plus"
        assert settings.device == "cpu"
        assert settings.grid_origin == (0, 0)

    def test_precedence(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"preset": "full", "epochs": 5}))
        from_file = resolve_settings({}, path)
        assert from_file.epochs == 5
        assert from_file.patch == PRESETS["full"]["patch"]
        flagged = resolve_settings({"epochs": 2, "seed": None}, path)
        assert flagged.epochs == 2
        assert flagged.seed == 0

    def test_flag_preset_overrides_file_preset(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"preset": "full"}))
        settings = resolve_settings({"preset": "desk"}, path)
        assert settings.size == PRESETS["desk"]["size"]

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError, match="preset"):
            resolve_settings({"preset": "huge"})

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"epochz": 3}))
        with pytest.raises(ConfigurationError):
            resolve_settings({}, path)

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigurationError):
            resolve_settings({}, path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            resolve_settings({}, tmp_path / "nope.json")

    def test_derived_configs(self):
        settings = resolve_settings({"depth": 3, "base_width": 8})
        model = settings.model_settings("unet_time_3d")
        assert model.n_timesteps == 12
        assert model.depth == 3
        train = settings.train_settings(timestep=9)
        assert train.timestep == 9
        assert train.beta_tversky == 0.7

    def test_device_from_env(self, monkeypatch):
        monkeypatch.setenv("ROADSEG_DEVICE", "cuda:1")
        assert resolve_settings().device == "cuda:1"


class TestCleanTimestep:
    """Tests for clean_timestep."""

    def test_full_year(self):
        assert clean_timestep(12) == CLEAN_TIMESTEP

    @pytest.mark.parametrize("timesteps", [1, 4, CLEAN_TIMESTEP])
    def test_short_sequences(self, timesteps):
        assert clean_timestep(timesteps) is None


class TestLogLevel:
    """Tests for log_level."""

    def test_verbosity_flags(self):
        assert log_level(1) == logging.INFO
        assert log_level(3) == logging.DEBUG

    def test_env(self, monkeypatch):
        monkeypatch.setenv("ROADSEG_LOG_LEVEL", "info")
        assert log_level() == logging.INFO

    def test_default(self, monkeypatch):
        monkeypatch.delenv("ROADSEG_LOG_LEVEL", raising=False)
        assert log_level() == logging.WARNING

    def test_invalid_env(self, monkeypatch):
        monkeypatch.setenv("ROADSEG_LOG_LEVEL", "chatty")
        assert log_level() == logging.WARNING
