"""Flat key = value config parsing and overlay semantics."""

import pytest

from multlab.config import (
    ConfigError,
    merged_config,
    parse_config_file,
    parse_config_text,
    require_grid,
)

SAMPLE = """
# full-line comment
limit = 100000            # trailing comment
z_factor = 2.5
method = divisor-multiples
label = "a # quoted hash"
flag = true
y_grid = [10.0, 31.6, 100.0]
names = [all, congruence:4:1]
empty = []
limit = 200000            # later assignment wins
"""


def test_parse_config_text():
    cfg = parse_config_text(SAMPLE)
    assert cfg["limit"] == 200000
    assert cfg["z_factor"] == 2.5
    assert cfg["method"] == "divisor-multiples"
    assert cfg["label"] == "a # quoted hash"
    assert cfg["flag"] is True
    assert cfg["y_grid"] == [10.0, 31.6, 100.0]
    assert cfg["names"] == ["all", "congruence:4:1"]
    assert cfg["empty"] == []


def test_parse_config_errors():
    with pytest.raises(ConfigError, match="line 1"):
        parse_config_text("just some words")
    with pytest.raises(ConfigError, match="bad key"):
        parse_config_text("two words = 1")
    with pytest.raises(ConfigError, match="empty value"):
        parse_config_text("k =")
    with pytest.raises(ConfigError, match="unterminated"):
        parse_config_text("k = [1, 2")
    with pytest.raises(ConfigError, match="nest"):
        parse_config_text("k = [[1], [2]]")
    with pytest.raises(ConfigError, match="line 3"):
        parse_config_text("a = 1\nb = 2\nc = [")


def test_parse_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("seed = 7\n", encoding="utf-8")
    assert parse_config_file(path) == {"seed": 7}


def test_merged_config():
    defaults = {"a": 1, "b": 2}
    assert merged_config(defaults, {"b": 5}, "exp") == {"a": 1, "b": 5}
    assert merged_config(defaults, {}, "exp") == defaults
    with pytest.raises(ConfigError) as err:
        merged_config(defaults, {"c": 3}, "exp")
    # the error must name the bad field and list the known ones
    assert "'c'" in str(err.value)
    assert "a, b" in str(err.value)


def test_require_grid():
    assert require_grid({"g": [1, 2]}, "g", "exp") == [1, 2]
    assert require_grid({"g": 3.5}, "g", "exp") == [3.5]
    with pytest.raises(ConfigError, match="empty grid"):
        require_grid({"g": []}, "g", "exp")
