"""Configuration reader for qlens.

Reads an optional ``[tool.qlens]`` table from a TOML file passed explicitly
on the command line (``--config PATH``).  There is no implicit discovery and
no environment-variable layer: a run is fully described by its flags plus
that one file.

Example configuration in pyproject.toml::

    [tool.qlens]
    rewrite_budget = 2000000
    seed = 7
    output_format = "json"
    verify_max_n = 2
    samples = 500
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_REWRITE_BUDGET = 1_000_000
OUTPUT_FORMATS = ("text", "json")


@dataclass
class QlensConfig:
    """Run configuration shared by all commands."""

    rewrite_budget: int = DEFAULT_REWRITE_BUDGET
    seed: int = 0
    output_format: str = "text"
    verify_max_n: int = 2  # larger --n still runs, with a warning
    samples: int = 500

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QlensConfig":
        """Create config from a dictionary (e.g. parsed TOML section).

        Raises:
            ConfigError: If a value has an unexpected type or range.
        """
        rewrite_budget = data.get("rewrite_budget", DEFAULT_REWRITE_BUDGET)
        seed = data.get("seed", 0)
        output_format = data.get("output_format", "text")
        verify_max_n = data.get("verify_max_n", 2)
        samples = data.get("samples", 500)

        # --- Type validation ---
        for name, val in (
            ("rewrite_budget", rewrite_budget),
            ("seed", seed),
            ("verify_max_n", verify_max_n),
            ("samples", samples),
        ):
            if not isinstance(val, int) or isinstance(val, bool):
                raise ConfigError(
                    f"{name} must be an integer, got {type(val).__name__}"
                )

        if rewrite_budget <= 0:
            raise ConfigError(f"rewrite_budget must be positive, got {rewrite_budget}")
        if verify_max_n < 1:
            raise ConfigError(f"verify_max_n must be at least 1, got {verify_max_n}")
        if samples < 0:
            raise ConfigError(f"samples must be non-negative, got {samples}")

        if not isinstance(output_format, str):
            raise ConfigError(
                "output_format must be a string, "
                f"got {type(output_format).__name__}"
            )
        if output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}, "
                f"got {output_format!r}"
            )

        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            logger.warning("Ignoring unknown [tool.qlens] keys: %s", ", ".join(unknown))

        return cls(
            rewrite_budget=rewrite_budget,
            seed=seed,
            output_format=output_format,
            verify_max_n=verify_max_n,
            samples=samples,
        )


def _load_toml(path: Path) -> dict[str, Any]:
    """Load a TOML file, using tomllib (3.11+) or tomli as fallback."""
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        try:
            import tomli as tomllib
        except ImportError:
            logger.warning(
                "tomli is not installed and Python < 3.11; "
                "TOML configuration will be ignored. "
                "Install tomli (`pip install tomli`) to enable config support."
            )
            return {}

    try:
        with path.open("rb") as f:
            return dict(tomllib.load(f))
    except OSError as exc:
        logger.warning("Cannot read TOML file %s: %s", path, exc)
        return {}
    except ValueError as exc:
        logger.warning("Invalid TOML in %s: %s", path, exc)
        return {}


def read_config(path: Path) -> QlensConfig:
    """Read qlens config from the ``[tool.qlens]`` table of a TOML file.

    Args:
        path: Path to the TOML file (usually a pyproject.toml).

    Returns:
        QlensConfig parsed from the file, or defaults if the table is absent.

    Raises:
        ConfigError: If a config value has an unexpected type or range.
    """
    data = _load_toml(path)
    tool = data.get("tool", {})
    if not isinstance(tool, dict):
        raise ConfigError(f"[tool] must be a table, got {type(tool).__name__}")
    tool_config = tool.get("qlens")
    if tool_config is None:
        logger.debug("No [tool.qlens] table in %s, using defaults", path)
        return QlensConfig()
    if not isinstance(tool_config, dict):
        raise ConfigError(
            f"[tool.qlens] must be a table, got {type(tool_config).__name__}"
        )
    logger.debug("Found [tool.qlens] config in %s", path)
    return QlensConfig.from_dict(tool_config)
