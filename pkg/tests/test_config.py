import json
import logging
import re

import numpy as np
import pytest

from quann.config_store import (DEFAULT_SETTINGS, ensure_runtime_folders, load_settings,
                                new_run_folder, save_settings, settings_for)
from quann.dynamics.envdyn import REFERENCE_P
from quann.errors import ConfigError, DataFormatError
from quann.logging_setup import _build_file_handler
from quann.state import (EnvMode, EnvSelection, ExperimentConfig, LagMode, LagSpec, RadiiKind,
                         RadiiSpec, RqaMode, parse_dims, sigma_range)


class TestRadiiSpec:
    def test_sigma_range(self):
        spec = RadiiSpec.parse("sigma:0.5:2.0:0.1")
        assert spec.kind is RadiiKind.SIGMA
        assert len(spec.values) == 16
        assert spec.values[0] == 0.5 and spec.values[-1] == 2.0

    def test_single_sigma(self):
        assert RadiiSpec.parse("sigma:2").values == (2.0,)

    def test_absolute(self):
        spec = RadiiSpec.parse("0.1, 0.4")
        assert spec.kind is RadiiKind.ABSOLUTE
        assert spec.values == (0.1, 0.4)

    @pytest.mark.parametrize("text", ["", "sigma:0", "sigma:1:2", "a,b", "-0.1", "sigma:2:1:0.1"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            RadiiSpec.parse(text)

    def test_resolve_uses_sample_deviation(self):
        series = np.array([1.0, 2.0, 3.0, 4.0])
        spec = RadiiSpec.parse("sigma:1:2:1")
        np.testing.assert_allclose(spec.resolve(series), np.array([1.0, 2.0]) * np.std(series, ddof=1))
        assert RadiiSpec.parse("0.4").resolve(series)[0] == 0.4

    def test_sigma_range_helper(self):
        assert sigma_range(1.0, 1.7, 0.1) == [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7]


class TestFlagValues:
    def test_lag(self):
        assert LagSpec.parse("auto").mode is LagMode.AUTO
        assert LagSpec.parse("3") == LagSpec(LagMode.FIXED, 3)
        with pytest.raises(ConfigError):
            LagSpec.parse("0")

    def test_env(self):
        assert EnvSelection.parse("uniform").mode is EnvMode.UNIFORM
        assert EnvSelection.parse("5") == EnvSelection(EnvMode.EIGENSTATE, 5)
        with pytest.raises(ConfigError):
            EnvSelection.parse("zero")
        with pytest.raises(ConfigError):
            EnvSelection.parse("0")

    def test_dims(self):
        assert parse_dims("3:9") == (3, 4, 5, 6, 7, 8, 9)
        assert parse_dims("7") == (7,)
        with pytest.raises(ConfigError):
            parse_dims("9:3")


class TestExperimentConfig:
    def test_defaults_per_command(self):
        cfg = ExperimentConfig.from_settings("rqa", settings_for(DEFAULT_SETTINGS, "rqa"))
        assert cfg.p == REFERENCE_P
        assert cfg.kept == 5000
        assert cfg.dim == 7
        assert cfg.mode is RqaMode.SUMMARY
        assert len(cfg.radii.values) == 16

        scan = ExperimentConfig.from_settings("prob-scan", settings_for(DEFAULT_SETTINGS, "prob-scan"))
        assert scan.kept == 2000
        assert scan.lag.mode is LagMode.AUTO
        assert scan.dims == (3, 4, 5, 6, 7, 8)

    def test_epochs_mode_defaults(self):
        cfg = ExperimentConfig.from_settings("rqa", settings_for(DEFAULT_SETTINGS, "rqa", "epochs"))
        assert cfg.kept == 100_000
        assert cfg.epochs * cfg.epoch_size == cfg.kept
        assert cfg.radii == RadiiSpec(RadiiKind.ABSOLUTE, (0.4,))

    def test_mode_read_from_settings(self):
        s = json.loads(json.dumps(DEFAULT_SETTINGS))
        s["mode"] = "epochs"
        assert settings_for(s, "rqa")["epoch_size"] == 10_000
        assert settings_for(s, "corr-dim")["epoch_size"] == 1000

    def test_steps_must_exceed_drop(self):
        s = settings_for(DEFAULT_SETTINGS, "dynamics")
        s.update(steps=100, drop=100)
        with pytest.raises(ConfigError):
            ExperimentConfig.from_settings("dynamics", s)

    def test_p_range(self):
        s = settings_for(DEFAULT_SETTINGS, "dynamics")
        s["p"] = 1.5
        with pytest.raises(ConfigError):
            ExperimentConfig.from_settings("dynamics", s)

    def test_missing_setting(self):
        s = settings_for(DEFAULT_SETTINGS, "dynamics")
        del s["steps"]
        with pytest.raises(ConfigError):
            ExperimentConfig.from_settings("dynamics", s)

    def test_bad_type(self):
        s = settings_for(DEFAULT_SETTINGS, "dynamics")
        s["steps"] = "many"
        with pytest.raises(ConfigError):
            ExperimentConfig.from_settings("dynamics", s)


class TestSettingsFile:
    def test_missing_default_file_gives_defaults(self, workdir):
        assert load_settings() == DEFAULT_SETTINGS

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            load_settings(tmp_path / "nope.json")

    def test_malformed(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(DataFormatError):
            load_settings(path)

    def test_file_value_beats_command_default(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"steps": 700, "commands": {"rqa": {"dim": 5}}}), encoding="utf-8")
        flat = settings_for(load_settings(path), "rqa")
        assert flat["steps"] == 700
        assert flat["dim"] == 5
        assert settings_for(load_settings(path), "corr-dim")["dims"] == "3:9"

    def test_unknown_key_warns(self, tmp_path, caplog):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"api_key": "x"}), encoding="utf-8")
        with caplog.at_level(logging.WARNING, logger="quann.config_store"):
            settings = load_settings(path)
        assert "api_key" not in settings
        assert "api_key" in caplog.text

    def test_save_and_load(self, tmp_path):
        path = tmp_path / "cfg" / "s.json"
        settings = json.loads(json.dumps(DEFAULT_SETTINGS))
        settings["p"] = 0.25
        save_settings(settings, path)
        assert load_settings(path)["p"] == 0.25


class TestRuntimeFolders:
    def test_ensure(self, workdir):
        ensure_runtime_folders()
        assert (workdir / "logs").is_dir() and (workdir / "runs").is_dir()

    def test_run_folder_name(self, tmp_path):
        folder = new_run_folder("rqa", root=tmp_path)
        assert folder.is_dir()
        assert re.fullmatch(r"\d{8}-\d{6}_rqa", folder.name)

    def test_rotating_handler(self, tmp_path):
        handler = _build_file_handler(tmp_path / "x.log", logging.INFO)
        try:
            assert handler.maxBytes == 1024 * 1024
            assert handler.backupCount == 5
        finally:
            handler.close()
