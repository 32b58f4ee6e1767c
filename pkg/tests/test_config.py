import json

import pytest

from tfbs_compact.config import ConfigError, RunConfig, load_config, parse_config

FULL = {
    "sigma": 0.1,
    "r": 0.08,
    "d": 0.025,
    "K": 50,
    "S": 100,
    "T": 1.0,
    "alpha": 0.75,
    "time_steps": 50,
    "grid": {"kind": "tr", "N": 50, "lambda": 6, "s_star": 50},
}


def test_parse_full():
    cfg = parse_config(FULL)
    assert cfg == RunConfig(0.1, 0.08, 0.025, 50.0, 100.0, 1.0, 0.75, 50, "tr", 50, 6.0, 50.0)


def test_parse_empty():
    assert parse_config({}) == RunConfig()


@pytest.mark.parametrize(
    "data,key",
    [
        ({"volatility": 0.2}, "volatility"),
        ({"grid": {"kind": "uniform", "steps": 3}}, "grid.steps"),
    ],
)
def test_unknown_keys_named(data, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(data)


@pytest.mark.parametrize(
    "data",
    [
        {"alpha": 1.5},
        {"alpha": 0.0},
        {"sigma": -0.1},
        {"K": 120, "S": 100},
        {"time_steps": 0},
        {"time_steps": 2.5},
        {"grid": {"N": 1}},
        {"grid": {"kind": "hex"}},
        {"grid": {"kind": 3}},
        {"grid": {"lambda": 0}},
        {"grid": []},
        {"sigma": "high"},
        {"sigma": True},
    ],
)
def test_invalid_values(data):
    with pytest.raises(ConfigError):
        parse_config(data)


def test_not_an_object():
    with pytest.raises(ConfigError):
        parse_config([1, 2])


def test_require_names_missing():
    cfg = parse_config({k: v for k, v in FULL.items() if k != "sigma"})
    with pytest.raises(ConfigError, match="sigma"):
        cfg.require("sigma", "r")
    with pytest.raises(ConfigError, match="grid.kind"):
        RunConfig().require("grid_kind")


def test_override_precedence():
    cfg = parse_config(FULL).override(alpha=0.9, N=None, grid_kind="quadratic")
    assert cfg.alpha == 0.9 and cfg.N == 50 and cfg.grid_kind == "quadratic"
    with pytest.raises(ConfigError):
        parse_config(FULL).override(alpha=2.0)


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(FULL))
    assert load_config(p).sigma == 0.1
    assert load_config(None) == RunConfig()
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
