"""
Command-line configuration: file discovery, format loaders and flag overrides.

Unlike the library loader in ``marginal_bell.core.config`` this one accepts an
explicit ``--config`` path, reads TOML, JSON or YAML, and lets errors reach
``main`` so a bad file is a usage error.

Precedence: defaults < config file < environment < command-line flags
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import tomllib
from abc import ABC, abstractmethod
from dataclasses import asdict
from pathlib import Path
from typing import Any, ClassVar

from marginal_bell.core import MarginalBellConfig, dict_to_config

logger = logging.getLogger(__name__)


class ConfigLoader(ABC):
    """One config file format, picked by suffix."""

    suffixes: ClassVar[tuple[str, ...]] = ()

    def can_load(self, path: Path) -> bool:
        return path.suffix in self.suffixes

    @abstractmethod
    def load(self, path: Path) -> dict[str, Any]:
        """Parse ``path`` into nested section dicts."""


class TOMLLoader(ConfigLoader):
    suffixes = (".toml",)

    def load(self, path: Path) -> dict[str, Any]:
        with open(path, "rb") as f:
            return tomllib.load(f)


class JSONLoader(ConfigLoader):
    suffixes = (".json",)

    def load(self, path: Path) -> dict[str, Any]:
        data = json.loads(path.read_text(encoding="utf-8"))
        return _require_mapping(path, data, "JSON object")


class YAMLLoader(ConfigLoader):
    """Needs PyYAML; imported on first use."""

    suffixes = (".yaml", ".yml")

    def load(self, path: Path) -> dict[str, Any]:
        import yaml

        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        return _require_mapping(path, data, "YAML mapping")


LOADERS: tuple[ConfigLoader, ...] = (TOMLLoader(), JSONLoader(), YAMLLoader())


def _require_mapping(path: Path, data: Any, kind: str) -> dict[str, Any]:
    if not isinstance(data, dict):
        raise ValueError(f"{path} must hold a {kind}")
    return data


def _existing(raw: str) -> Path:
    path = Path(raw)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {raw}")
    return path


def find_config_file(explicit_path: str | None = None) -> Path | None:
    """
    First config file in this order, or None:

    1. ``--config PATH``
    2. ``$MARGINAL_BELL_CONFIG``
    3. ``./marginal-bell.toml``
    4. ``~/.config/marginal-bell/config.{toml,json,yaml}``

    A path named by the flag or the env var must exist (FileNotFoundError).
    """
    if explicit_path:
        return _existing(explicit_path)

    env_path = os.getenv("MARGINAL_BELL_CONFIG")
    if env_path:
        return _existing(env_path)

    local_path = Path("./marginal-bell.toml")
    if local_path.exists():
        return local_path

    user_dir = Path.home() / ".config" / "marginal-bell"
    for name in ("config.toml", "config.json", "config.yaml"):
        candidate = user_dir / name
        if candidate.exists():
            return candidate

    return None


def load_config(config_path: Path) -> dict[str, Any]:
    """Parse ``config_path`` with the loader for its suffix; ValueError if none fits."""
    for loader in LOADERS:
        if loader.can_load(config_path):
            return loader.load(config_path)
    raise ValueError(f"Unsupported config format: {config_path.suffix}")


def get_default_config() -> dict[str, Any]:
    return asdict(MarginalBellConfig())


def merge_configs(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursive merge; ``override`` wins and neither input is modified."""
    merged = dict(base)
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            merged[key] = merge_configs(current, value)
        else:
            merged[key] = value
    return merged


def _env_overrides() -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    mode = os.getenv("MARGINAL_BELL_MODE")
    if mode:
        overrides.setdefault("arithmetic", {})["mode"] = mode
    grid_steps = os.getenv("MARGINAL_BELL_GRID_STEPS")
    if grid_steps:
        try:
            overrides.setdefault("scan", {})["grid_steps"] = int(grid_steps)
        except ValueError:
            logger.warning("Ignoring non-integer MARGINAL_BELL_GRID_STEPS=%r", grid_steps)
    return overrides


# (argparse dest, config section, config key); a flag counts when it is not None/False.
_FLAG_TARGETS: tuple[tuple[str, str, str], ...] = (
    ("mode", "arithmetic", "mode"),
    ("tol", "arithmetic", "float_tolerance"),
    ("tol", "polytope", "feasibility_tolerance"),
    ("grid_steps", "scan", "grid_steps"),
    ("full_sphere", "scan", "full_sphere"),
    ("limit", "search", "limit"),
    ("ascii", "render", "ascii"),
    ("cell_size", "render", "cell_size"),
    ("seed", "reproduce", "seed"),
)


def _cli_overrides(args: argparse.Namespace) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    for dest, section, key in _FLAG_TARGETS:
        value = getattr(args, dest, None)
        if value is None or value is False:
            continue
        overrides.setdefault(section, {})[key] = value
    return overrides


def build_config(args: argparse.Namespace) -> MarginalBellConfig:
    """Merged config for one run; file and format errors propagate to ``main``."""
    config = get_default_config()

    if not getattr(args, "no_config", False):
        config_path = find_config_file(getattr(args, "config", None))
        if config_path:
            config = merge_configs(config, load_config(config_path))
            logger.debug("Loaded config: %s", config_path)

    config = merge_configs(config, _env_overrides())
    config = merge_configs(config, _cli_overrides(args))
    return dict_to_config(config)


__all__ = [
    "ConfigLoader",
    "JSONLoader",
    "LOADERS",
    "TOMLLoader",
    "YAMLLoader",
    "build_config",
    "find_config_file",
    "get_default_config",
    "load_config",
    "merge_configs",
]
