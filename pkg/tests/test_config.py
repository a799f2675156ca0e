"""Tests for src/config.py"""

import logging

import pytest
import yaml

from src.config import (
    NumericsConfig,
    SamplingConfig,
    Settings,
    get_settings,
    load_settings,
)


def _write(path, data) -> None:
    with open(path, "w") as f:
        yaml.safe_dump(data, f)


def test_repo_configs_match_defaults():
    assert load_settings() == Settings()


def test_get_settings_is_cached():
    assert get_settings() is get_settings()


def test_missing_directory_uses_defaults(tmp_path):
    settings = load_settings(tmp_path / "nowhere")
    assert settings.numerics == NumericsConfig()
    assert settings.sampling == SamplingConfig()


def test_partial_override(tmp_path):
    _write(tmp_path / "numerics.yaml", {"region_tol": 1e-6})
    _write(tmp_path / "sampling.yaml", {"scheme": "tilted", "workers": 4})
    settings = load_settings(tmp_path)
    assert settings.numerics.region_tol == 1e-6
    assert settings.numerics.hull_margin == NumericsConfig().hull_margin
    assert settings.sampling.scheme == "tilted"
    assert settings.sampling.workers == 4


def test_empty_file(tmp_path):
    (tmp_path / "sampling.yaml").write_text("")
    assert load_settings(tmp_path).sampling == SamplingConfig()


def test_unknown_keys_are_logged(tmp_path, caplog):
    _write(tmp_path / "numerics.yaml", {"region_tol": 1e-8, "typo_tol": 1.0})
    with caplog.at_level(logging.WARNING, logger="src.config"):
        settings = load_settings(tmp_path)
    assert settings.numerics.region_tol == 1e-8
    assert "typo_tol" in caplog.text


def test_non_mapping_is_rejected(tmp_path):
    (tmp_path / "numerics.yaml").write_text("- 1\n- 2\n")
    with pytest.raises(ValueError, match="mapping"):
        load_settings(tmp_path)


@pytest.mark.parametrize(
    "data",
    [
        {"scheme": "sobol"},
        {"chunk_size": 0},
        {"workers": 0},
        {"certification_samples": -1},
        {"epsilon_grid": 1},
    ],
)
def test_invalid_sampling(tmp_path, data):
    _write(tmp_path / "sampling.yaml", data)
    with pytest.raises(ValueError):
        load_settings(tmp_path)


@pytest.mark.parametrize("value", [-1e-9, "small"])
def test_invalid_tolerance(value):
    with pytest.raises(ValueError, match="non-negative"):
        NumericsConfig(region_tol=value)


def test_settings_are_frozen():
    with pytest.raises(AttributeError):
        get_settings().numerics.region_tol = 1.0
