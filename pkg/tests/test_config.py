"""Tests for the config module."""

import logging
import textwrap
from pathlib import Path

import pytest

from qlens.config import DEFAULT_REWRITE_BUDGET, QlensConfig, _load_toml, read_config
from qlens.exceptions import ConfigError

# ---------------------------------------------------------------------------
# QlensConfig.from_dict
# ---------------------------------------------------------------------------


def test_from_dict_full() -> None:
    """All fields are populated from a dictionary."""
    data = {
        "rewrite_budget": 2_000_000,
        "seed": 7,
        "output_format": "json",
        "verify_max_n": 3,
        "samples": 50,
    }
    cfg = QlensConfig.from_dict(data)

    assert cfg.rewrite_budget == 2_000_000
    assert cfg.seed == 7
    assert cfg.output_format == "json"
    assert cfg.verify_max_n == 3
    assert cfg.samples == 50


def test_from_dict_empty() -> None:
    """Empty dict yields defaults."""
    cfg = QlensConfig.from_dict({})

    assert cfg == QlensConfig()
    assert cfg.rewrite_budget == DEFAULT_REWRITE_BUDGET
    assert cfg.output_format == "text"
    assert cfg.verify_max_n == 2


def test_from_dict_partial() -> None:
    """Partial dict fills only provided fields."""
    cfg = QlensConfig.from_dict({"seed": 3})

    assert cfg.seed == 3
    assert cfg.samples == 500


@pytest.mark.parametrize(
    ("key", "value"),
    [
        ("rewrite_budget", "lots"),
        ("seed", 1.5),
        ("verify_max_n", True),
        ("samples", None),
    ],
)
def test_from_dict_rejects_non_integers(key: str, value: object) -> None:
    with pytest.raises(ConfigError, match=f"{key} must be an integer"):
        QlensConfig.from_dict({key: value})


def test_from_dict_rejects_non_positive_budget() -> None:
    with pytest.raises(ConfigError, match="rewrite_budget must be positive"):
        QlensConfig.from_dict({"rewrite_budget": 0})


def test_from_dict_rejects_small_verify_max_n() -> None:
    with pytest.raises(ConfigError, match="verify_max_n must be at least 1"):
        QlensConfig.from_dict({"verify_max_n": 0})


def test_from_dict_rejects_negative_samples() -> None:
    with pytest.raises(ConfigError, match="non-negative"):
        QlensConfig.from_dict({"samples": -1})


def test_from_dict_zero_samples_allowed() -> None:
    assert QlensConfig.from_dict({"samples": 0}).samples == 0


def test_from_dict_rejects_unknown_format() -> None:
    with pytest.raises(ConfigError, match="output_format must be one of"):
        QlensConfig.from_dict({"output_format": "yaml"})
    with pytest.raises(ConfigError, match="output_format must be a string"):
        QlensConfig.from_dict({"output_format": 1})


def test_from_dict_warns_on_unknown_keys(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="qlens.config"):
        QlensConfig.from_dict({"seeed": 1})

    assert any("seeed" in r.message for r in caplog.records)


# ---------------------------------------------------------------------------
# _load_toml
# ---------------------------------------------------------------------------


def test_load_toml_valid(tmp_path: Path) -> None:
    """Loads a well-formed TOML file."""
    toml_file = tmp_path / "test.toml"
    toml_file.write_text(
        textwrap.dedent("""\
        [tool.qlens]
        seed = 11
        """),
        encoding="utf-8",
    )

    data = _load_toml(toml_file)

    assert data["tool"]["qlens"]["seed"] == 11


def test_load_toml_invalid(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    """Invalid TOML yields an empty dict and a warning."""
    toml_file = tmp_path / "bad.toml"
    toml_file.write_text("[tool.qlens\nseed = ", encoding="utf-8")

    with caplog.at_level(logging.WARNING, logger="qlens.config"):
        assert _load_toml(toml_file) == {}

    assert any("Invalid TOML" in r.message for r in caplog.records)


def test_load_toml_missing_file(tmp_path: Path) -> None:
    assert _load_toml(tmp_path / "nope.toml") == {}


# ---------------------------------------------------------------------------
# read_config
# ---------------------------------------------------------------------------


def test_read_config_with_section(tmp_path: Path) -> None:
    toml_file = tmp_path / "pyproject.toml"
    toml_file.write_text(
        textwrap.dedent("""\
        [project]
        name = "anything"

        [tool.qlens]
        rewrite_budget = 5000
        output_format = "json"
        """),
        encoding="utf-8",
    )

    cfg = read_config(toml_file)

    assert cfg.rewrite_budget == 5000
    assert cfg.output_format == "json"
    assert cfg.seed == 0


def test_read_config_without_section(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    toml_file = tmp_path / "pyproject.toml"
    toml_file.write_text('[project]\nname = "x"\n', encoding="utf-8")

    with caplog.at_level(logging.DEBUG, logger="qlens.config"):
        cfg = read_config(toml_file)

    assert cfg == QlensConfig()
    assert any("No [tool.qlens] table" in r.message for r in caplog.records)


def test_read_config_empty_file(tmp_path: Path) -> None:
    toml_file = tmp_path / "empty.toml"
    toml_file.write_text("", encoding="utf-8")

    assert read_config(toml_file) == QlensConfig()


def test_read_config_section_not_a_table(tmp_path: Path) -> None:
    toml_file = tmp_path / "pyproject.toml"
    toml_file.write_text('[tool]\nqlens = "fast"\n', encoding="utf-8")

    with pytest.raises(ConfigError, match="must be a table"):
        read_config(toml_file)


def test_read_config_bad_value(tmp_path: Path) -> None:
    toml_file = tmp_path / "pyproject.toml"
    toml_file.write_text("[tool.qlens]\nrewrite_budget = -3\n", encoding="utf-8")

    with pytest.raises(ConfigError):
        read_config(toml_file)


def test_read_config_tool_not_a_table(tmp_path: Path) -> None:
    toml_file = tmp_path / "pyproject.toml"
    toml_file.write_text('tool = "qlens"\n', encoding="utf-8")

    with pytest.raises(ConfigError, match=r"\[tool\] must be a table"):
        read_config(toml_file)
