"""
Tests for configuration loading.
"""

import math
from pathlib import Path

import pytest

from zqforcing.config import (
    AppConfig,
    SolverConfig,
    VerifyConfig,
    config_from_dict,
    default_workers,
    format_q,
    load_config,
    parse_q,
)
from zqforcing.errors import ConfigError


class TestParseQ:
    @pytest.mark.parametrize("text,expected", [("0", 0), ("3", 3), (2, 2), ("inf", math.inf), ("Infinity", math.inf)])
    def test_valid(self, text, expected):
        assert parse_q(text) == expected

    @pytest.mark.parametrize("text", ["-1", -2, "two", True])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_q(text)

    def test_format(self):
        assert format_q(math.inf) == "inf"
        assert format_q(4) == "4"


class TestDataclasses:
    def test_defaults(self):
        cfg = AppConfig()
        assert cfg.solver.q == 1
        assert cfg.workers == 1
        assert cfg.census.n_limit == 20

    def test_solver_q_is_parsed(self):
        assert SolverConfig(q="inf").q == math.inf
        assert SolverConfig().with_q(3).q == 3

    def test_non_positive_limit(self):
        with pytest.raises(ConfigError):
            SolverConfig(state_limit=0)

    @pytest.mark.parametrize("key", ["confluence_n", "confluence_orders", "fort_n", "single_force_n"])
    def test_non_positive_verify_scale(self, key):
        with pytest.raises(ConfigError):
            VerifyConfig(**{key: 0})

    def test_shipped_file_uses_documented_verify_scales(self, monkeypatch):
        monkeypatch.delenv("ZQ_WORKERS", raising=False)
        cfg = load_config(Path(__file__).resolve().parent.parent / "config.yaml")
        assert cfg.verify == VerifyConfig()
        assert cfg.verify.confluence_orders == 100


class TestLoading:
    def test_missing_default_file_gives_defaults(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("ZQ_WORKERS", raising=False)
        assert load_config() == AppConfig()

    def test_missing_explicit_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.yaml")

    def test_yaml_sections(self, tmp_path, monkeypatch):
        monkeypatch.delenv("ZQ_WORKERS", raising=False)
        path = tmp_path / "config.yaml"
        path.write_text("solver:\n  q: inf\n  state_limit: 500\nworkers: 3\n", encoding="utf-8")
        cfg = load_config(path)
        assert cfg.solver.q == math.inf
        assert cfg.solver.state_limit == 500
        assert cfg.workers == 3

    def test_unknown_keys(self):
        with pytest.raises(ConfigError):
            config_from_dict({"solvers": {}})
        with pytest.raises(ConfigError):
            config_from_dict({"solver": {"depth": 3}})

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("solver: [1, 2\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_project_config_loads(self, monkeypatch):
        from pathlib import Path

        monkeypatch.delenv("ZQ_WORKERS", raising=False)
        project = Path(__file__).resolve().parent.parent / "config.yaml"
        assert load_config(project).verify.census_n == 16


class TestWorkersEnvironment:
    def test_unset(self):
        assert default_workers({}) is None

    def test_value(self):
        assert default_workers({"ZQ_WORKERS": "4"}) == 4

    @pytest.mark.parametrize("raw", ["0", "-2", "many"])
    def test_invalid(self, raw):
        with pytest.raises(ConfigError):
            default_workers({"ZQ_WORKERS": raw})

    def test_overrides_config_file(self, monkeypatch):
        monkeypatch.setenv("ZQ_WORKERS", "6")
        assert config_from_dict({"workers": 2}).workers == 6
