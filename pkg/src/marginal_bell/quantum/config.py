"""Scan configuration and profile management."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union, cast

import yaml


@dataclass
class ScanProfile:
    """Resolution and refinement settings for :func:`violation_scan`."""

    # Polar angle steps over [0, pi]; the grid has steps + 1 values
    grid_steps: int = 8

    # Sample the azimuth uniformly instead of the four principal half-planes
    full_sphere: bool = False

    # Azimuth samples when full_sphere is set
    phi_steps: int = 16

    # Coordinate-descent refinement after the grid stage
    refine: bool = True
    refine_tolerance: float = 1e-6

    # Largest exhaustive grid; bigger scans fall back to coordinate sweeps
    max_grid_points: int = 2_000_000

    description: str = ""

    def phi_values(self) -> tuple[float, ...]:
        if self.full_sphere:
            return tuple(j * 2 * math.pi / self.phi_steps for j in range(self.phi_steps))
        return (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


# Preset scan profiles
SCAN_PROFILES: dict[str, ScanProfile] = {
    "coarse": ScanProfile(
        grid_steps=4,
        refine_tolerance=1e-4,
        description="Quick look; quarter-turn polar grid",
    ),
    "default": ScanProfile(
        grid_steps=8,
        description="Principal half-planes, pi/8 polar grid",
    ),
    "fine": ScanProfile(
        grid_steps=16,
        refine_tolerance=1e-8,
        description="pi/16 polar grid with tight refinement",
    ),
    "full-sphere": ScanProfile(
        grid_steps=8,
        full_sphere=True,
        phi_steps=8,
        description="Uniform azimuth as well as polar angle",
    ),
}


def find_profiles_directory() -> Path:
    """Find the scan profiles directory."""
    # 1. Environment variable
    env_path = os.getenv("MARGINAL_BELL_PROFILES")
    if env_path:
        return Path(env_path)

    # 2. ./profiles (current directory)
    local_path = Path("./profiles")
    if local_path.exists():
        return local_path

    # 3. Package default profiles
    return Path(__file__).parent / "profiles"


def load_scan_profile(name: str) -> ScanProfile:
    """Load a scan profile by name."""
    if name in SCAN_PROFILES:
        return SCAN_PROFILES[name]

    profiles_dir = find_profiles_directory()
    for suffix in (".yaml", ".yml"):
        profile_path = profiles_dir / f"{name}{suffix}"
        if profile_path.exists():
            with open(profile_path) as f:
                return _dict_to_profile(yaml.safe_load(f) or {})

    json_path = profiles_dir / f"{name}.json"
    if json_path.exists():
        with open(json_path) as f:
            return _dict_to_profile(json.load(f))

    raise ValueError(f"Unknown scan profile: {name}")


def _dict_to_profile(data: dict[str, object]) -> ScanProfile:
    """Convert dict to ScanProfile."""
    if not data:
        return ScanProfile()

    def get_int(key: str, default: int) -> int:
        val = data.get(key, default)
        if val is None:
            return default
        return int(cast(Union[str, int, float], val))

    def get_float(key: str, default: float) -> float:
        val = data.get(key, default)
        if val is None:
            return default
        return float(cast(Union[str, int, float], val))

    def get_bool(key: str, default: bool) -> bool:
        val = data.get(key, default)
        if val is None:
            return default
        return bool(cast(Union[bool, int], val))

    return ScanProfile(
        grid_steps=get_int("grid_steps", 8),
        full_sphere=get_bool("full_sphere", False),
        phi_steps=get_int("phi_steps", 16),
        refine=get_bool("refine", True),
        refine_tolerance=get_float("refine_tolerance", 1e-6),
        max_grid_points=get_int("max_grid_points", 2_000_000),
        description=str(data.get("description") or ""),
    )


def list_available_profiles(directory: Optional[Path] = None) -> list[str]:
    """List all available scan profiles."""
    profiles = list(SCAN_PROFILES.keys())

    profiles_dir = directory or find_profiles_directory()
    if profiles_dir.exists():
        for f in profiles_dir.iterdir():
            if f.suffix in (".yaml", ".yml", ".json"):
                if f.stem not in profiles:
                    profiles.append(f.stem)

    return sorted(profiles)


__all__ = [
    "SCAN_PROFILES",
    "ScanProfile",
    "find_profiles_directory",
    "list_available_profiles",
    "load_scan_profile",
]
