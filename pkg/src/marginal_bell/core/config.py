"""Library configuration management with TOML support."""
from __future__ import annotations

import logging
import os
import tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

logger = logging.getLogger(__name__)


@dataclass
class ArithmeticConfig:
    """Default arithmetic for distributions built from user input."""

    mode: str = "rational"
    float_tolerance: float = 1e-9


@dataclass
class PolytopeConfig:
    """Simplex tolerances and limits."""

    feasibility_tolerance: float = 1e-8
    max_pivots: int = 10000


@dataclass
class ScanConfig:
    """Quantum violation scan settings."""

    profile: str = "default"
    grid_steps: int = 8
    refine_tolerance: float = 1e-6
    full_sphere: bool = False
    max_grid_points: int = 2_000_000


@dataclass
class SearchConfig:
    """Cover search enumeration bound."""

    limit: int = 100_000


@dataclass
class RenderConfig:
    """Diagram output settings."""

    cell_size: int = 24
    ascii: bool = False
    palette_increment: int = 101


@dataclass
class ReproduceConfig:
    """Sample sizes used by the acceptance reproduction run."""

    no_signaling_samples: int = 10_000
    random_rho_samples: int = 1_000
    seed: int = 2024
    hardy_grid_steps: int = 400


@dataclass
class MarginalBellConfig:
    """Root configuration for marginal-bell."""

    arithmetic: ArithmeticConfig = field(default_factory=ArithmeticConfig)
    polytope: PolytopeConfig = field(default_factory=PolytopeConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    search: SearchConfig = field(default_factory=SearchConfig)
    render: RenderConfig = field(default_factory=RenderConfig)
    reproduce: ReproduceConfig = field(default_factory=ReproduceConfig)


def find_config_file() -> Path | None:
    """
    Find configuration file using precedence order.

    1. MARGINAL_BELL_CONFIG environment variable
    2. ./marginal-bell.toml (current directory)
    3. ~/.config/marginal-bell/config.toml (user config)

    Returns Path if found, None if no config exists.
    """
    env_path = os.getenv("MARGINAL_BELL_CONFIG")
    if env_path:
        path = Path(env_path)
        if path.exists():
            return path

    local_path = Path("./marginal-bell.toml")
    if local_path.exists():
        return local_path

    user_config = Path.home() / ".config" / "marginal-bell" / "config.toml"
    if user_config.exists():
        return user_config

    return None


def load_toml_config(config_path: Path) -> dict[str, Any]:
    """Load configuration from TOML file."""
    with open(config_path, "rb") as f:
        return tomllib.load(f)


def dict_to_config(data: dict[str, Any]) -> MarginalBellConfig:
    """Convert dict to MarginalBellConfig dataclass."""
    arithmetic = data.get("arithmetic", {})
    polytope = data.get("polytope", {})
    scan = data.get("scan", {})
    search = data.get("search", {})
    render = data.get("render", {})
    reproduce = data.get("reproduce", {})

    return MarginalBellConfig(
        arithmetic=ArithmeticConfig(
            mode=arithmetic.get("mode", "rational"),
            float_tolerance=float(arithmetic.get("float_tolerance", 1e-9)),
        ),
        polytope=PolytopeConfig(
            feasibility_tolerance=float(polytope.get("feasibility_tolerance", 1e-8)),
            max_pivots=int(polytope.get("max_pivots", 10000)),
        ),
        scan=ScanConfig(
            profile=scan.get("profile", "default"),
            grid_steps=int(scan.get("grid_steps", 8)),
            refine_tolerance=float(scan.get("refine_tolerance", 1e-6)),
            full_sphere=bool(scan.get("full_sphere", False)),
            max_grid_points=int(scan.get("max_grid_points", 2_000_000)),
        ),
        search=SearchConfig(limit=int(search.get("limit", 100_000))),
        render=RenderConfig(
            cell_size=int(render.get("cell_size", 24)),
            ascii=bool(render.get("ascii", False)),
            palette_increment=int(render.get("palette_increment", 101)),
        ),
        reproduce=ReproduceConfig(
            no_signaling_samples=int(reproduce.get("no_signaling_samples", 10_000)),
            random_rho_samples=int(reproduce.get("random_rho_samples", 1_000)),
            seed=int(reproduce.get("seed", 2024)),
            hardy_grid_steps=int(reproduce.get("hardy_grid_steps", 400)),
        ),
    )


def load_config() -> MarginalBellConfig:
    """
    Load configuration from file or use defaults.

    Configuration precedence:
    1. Config file (if found)
    2. Environment variables (for specific overrides)
    3. Built-in defaults
    """
    config = MarginalBellConfig()

    config_path = find_config_file()
    if config_path:
        try:
            config = dict_to_config(load_toml_config(config_path))
        except (OSError, tomllib.TOMLDecodeError, TypeError, ValueError) as exc:
            logger.warning("Failed to load config from %s: %s", config_path, exc)

    mode = os.getenv("MARGINAL_BELL_MODE")
    if mode:
        config.arithmetic.mode = mode

    grid_steps = os.getenv("MARGINAL_BELL_GRID_STEPS")
    if grid_steps:
        try:
            config.scan.grid_steps = int(grid_steps)
        except ValueError:
            logger.warning("Ignoring non-integer MARGINAL_BELL_GRID_STEPS=%r", grid_steps)

    return config


# Global config instance (loaded once at startup)
_config: Optional[MarginalBellConfig] = None


def get_config() -> MarginalBellConfig:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reload_config() -> MarginalBellConfig:
    """Reload configuration from disk."""
    global _config
    _config = load_config()
    return _config


def set_config(config: MarginalBellConfig) -> MarginalBellConfig:
    """Install ``config`` as the process-wide instance (used by the CLI after merging flags)."""
    global _config
    _config = config
    return _config


__all__ = [
    "ArithmeticConfig",
    "MarginalBellConfig",
    "PolytopeConfig",
    "RenderConfig",
    "ReproduceConfig",
    "ScanConfig",
    "SearchConfig",
    "dict_to_config",
    "find_config_file",
    "get_config",
    "load_config",
    "reload_config",
    "set_config",
]
