"""Tests for engine settings and experiment configuration files."""

from __future__ import annotations

from typing import TYPE_CHECKING

import pytest

from mpemba_relax.config import (
    EngineSettings,
    ExperimentConfig,
    ModelKind,
    ScanKind,
    load_config,
    parse_config,
)
from mpemba_relax.errors import ConfigError, NonPositiveTemperatureError
from mpemba_relax.qdot import SignConvention
from mpemba_relax.twosite import StateOrdering

if TYPE_CHECKING:
    from pathlib import Path

DOT_HEADER = """
model: qdot
qdot:
  epsilon0: 2.0
  u: 1.25
  mean_mu: 3.0
"""


class TestEngineSettings:
    """Tests for EngineSettings."""

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        for name in ("MPEMBA_THREADS", "MPEMBA_LOG_LEVEL", "MPEMBA_PRECISION"):
            monkeypatch.delenv(name, raising=False)
        settings = EngineSettings.from_env()
        assert settings == EngineSettings(threads=1, log_level="WARNING", precision=12)

    def test_from_env(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("MPEMBA_THREADS", "4")
        monkeypatch.setenv("MPEMBA_LOG_LEVEL", "debug")
        monkeypatch.setenv("MPEMBA_PRECISION", "8")
        settings = EngineSettings.from_env()
        assert settings.threads == 4
        assert settings.log_level == "DEBUG"
        assert settings.precision == 8

    def test_invalid_env_integer(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("MPEMBA_THREADS", "many")
        with pytest.raises(ConfigError) as exc_info:
            EngineSettings.from_env()
        assert exc_info.value.field == "MPEMBA_THREADS"

    @pytest.mark.parametrize(
        ("kwargs", "field"),
        [
            ({"threads": 0}, "threads"),
            ({"log_level": "LOUD"}, "log_level"),
            ({"precision": 5}, "precision"),
            ({"precision": 18}, "precision"),
        ],
    )
    def test_rejects_out_of_range(self, kwargs: dict[str, object], field: str) -> None:
        with pytest.raises(ConfigError) as exc_info:
            EngineSettings(**kwargs)  # type: ignore[arg-type]
        assert exc_info.value.field == field


class TestShippedConfigs:
    """Every experiment file under configs/ parses and builds its model."""

    def test_all_configs_build(self, configs_dir: Path) -> None:
        paths = sorted(configs_dir.glob("*.yaml"))
        assert len(paths) >= 10
        for path in paths:
            config = load_config(path)
            if config.model is ModelKind.QDOT:
                params = config.dot_params()
                if config.initial_states:
                    assert len(config.dot_states(params)) == len(config.initial_states)
            else:
                config.two_site_params()
                if config.initial_states:
                    assert len(config.two_site_states()) == len(config.initial_states)

    def test_fig1c(self, configs_dir: Path) -> None:
        config = load_config(configs_dir / "fig1c_evolve.yaml")
        params = config.dot_params()
        assert params.relax_baths.mu_left == 7.0
        assert params.relax_baths.mu_right == -1.0
        assert config.criterion.convention is SignConvention.EXACT
        assert [label for label, _ in config.dot_states(params)] == ["I", "II"]
        assert config.time_grid().size == 301

    def test_region_map(self, configs_dir: Path) -> None:
        config = load_config(configs_dir / "fig6c_region_map.yaml")
        scan = config.require_scan()
        assert scan.kind is ScanKind.REGION_MAP
        assert config.two_site_params().ordering is StateOrdering.EMPTY_FIRST
        assert scan.biases is not None
        assert scan.biases.grid() == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]


class TestParseConfig:
    """Tests for parse_config error reporting."""

    def test_unknown_key_reports_path(self) -> None:
        with pytest.raises(ConfigError) as exc_info:
            parse_config(DOT_HEADER + "  colour: blue\n")
        assert exc_info.value.field == "qdot.colour"

    def test_yaml_error_reports_line(self) -> None:
        with pytest.raises(ConfigError, match="line"):
            parse_config("model: qdot\nqdot: [1, 2\nscan: {}\n", source="broken.yaml")

    def test_top_level_must_be_mapping(self) -> None:
        with pytest.raises(ConfigError, match="mapping"):
            parse_config("- 1\n- 2\n")

    def test_missing_model_section(self) -> None:
        with pytest.raises(ConfigError, match="needs a 'two_site' section"):
            parse_config("model: two_site\n")

    def test_both_state_sources(self) -> None:
        text = DOT_HEADER + (
            "initial_states:\n"
            "  - label: I\n"
            "    populations: [0.25, 0.25, 0.25, 0.25]\n"
            "    preparing: {mu_left: 2.0, mu_right: 1.0}\n"
        )
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "initial_states.0"

    def test_duplicate_labels(self) -> None:
        text = DOT_HEADER + (
            "initial_states:\n"
            "  - {label: I, populations: [0.25, 0.25, 0.25, 0.25]}\n"
            "  - {label: I, populations: [0.1, 0.2, 0.3, 0.4]}\n"
        )
        with pytest.raises(ConfigError, match="unique"):
            parse_config(text)

    def test_axis_needs_values_or_range(self) -> None:
        text = DOT_HEADER + "scan:\n  kind: boundary\n  mu2: {start: 0.0, stop: 1.0}\n"
        with pytest.raises(ConfigError) as exc_info:
            parse_config(text)
        assert exc_info.value.field == "scan.mu2"

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(tmp_path / "absent.yaml")


class TestBuilders:
    """Tests for building model objects from a parsed config."""

    def test_zero_temperature_field(self) -> None:
        config = parse_config(DOT_HEADER + "  temperature: 0.0\n")
        with pytest.raises(NonPositiveTemperatureError) as exc_info:
            config.dot_params()
        assert exc_info.value.field == "qdot.temperature"

    def test_preparing_temperature_field(self) -> None:
        text = DOT_HEADER + (
            "initial_states:\n"
            "  - label: I\n"
            "    preparing: {mu_left: 2.0, mu_right: 1.0, temperature: -1.0}\n"
        )
        config = parse_config(text)
        with pytest.raises(NonPositiveTemperatureError) as exc_info:
            config.dot_states(config.dot_params())
        assert exc_info.value.field == "initial_states.0.preparing.temperature"

    def test_two_site_rejects_preparing(self) -> None:
        config = ExperimentConfig.model_validate(
            {
                "model": "two_site",
                "two_site": {},
                "initial_states": [
                    {"label": "I", "preparing": {"mu_left": 1.0, "mu_right": 0.0}},
                ],
            }
        )
        with pytest.raises(ConfigError) as exc_info:
            config.two_site_states()
        assert exc_info.value.field == "initial_states.0.preparing"

    def test_two_site_coherence(self) -> None:
        config = ExperimentConfig.model_validate(
            {
                "model": "two_site",
                "two_site": {"ordering": "empty_first"},
                "initial_states": [
                    {
                        "label": "I",
                        "populations": [0.1, 0.25, 0.65, 0.0],
                        "coherence": {"re": 0.2},
                    },
                ],
            }
        )
        [(label, state)] = config.two_site_states()
        assert label == "I"
        assert state.coherence == 0.2 + 0j

    def test_missing_states(self) -> None:
        config = parse_config(DOT_HEADER)
        with pytest.raises(ConfigError) as exc_info:
            config.dot_states(config.dot_params())
        assert exc_info.value.field == "initial_states"

    def test_missing_scan(self) -> None:
        with pytest.raises(ConfigError) as exc_info:
            parse_config(DOT_HEADER).require_scan()
        assert exc_info.value.field == "scan"
