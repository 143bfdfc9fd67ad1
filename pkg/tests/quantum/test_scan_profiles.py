import json
import shutil
from pathlib import Path

import pytest

from marginal_bell.core import MarginalBellConfig, set_config
from marginal_bell.inequality import n_party_hardy
from marginal_bell.quantum import (
    SCAN_PROFILES,
    ScanProfile,
    find_profiles_directory,
    list_available_profiles,
    load_scan_profile,
    singlet,
    violation_scan,
)
from marginal_bell.quantum import config as profile_config

PACKAGED = Path(profile_config.__file__).parent / "profiles"


@pytest.fixture
def profiles_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    monkeypatch.setenv("MARGINAL_BELL_PROFILES", str(tmp_path))
    return tmp_path


def test_presets_are_available_by_name() -> None:
    assert load_scan_profile("coarse").grid_steps == 4
    assert load_scan_profile("fine").refine_tolerance == 1e-8
    assert load_scan_profile("full-sphere").full_sphere


def test_default_profile_scans_principal_half_planes() -> None:
    profile = ScanProfile()

    assert len(profile.phi_values()) == 4
    assert len(ScanProfile(full_sphere=True, phi_steps=6).phi_values()) == 6


def test_unknown_profile_raises(profiles_dir: Path) -> None:
    with pytest.raises(ValueError):
        load_scan_profile("does-not-exist")


def test_yaml_profile_is_loaded_from_profiles_directory(profiles_dir: Path) -> None:
    (profiles_dir / "wide.yaml").write_text(
        "grid_steps: 6\nfull_sphere: true\nphi_steps: 12\nrefine: false\n", encoding="utf-8"
    )

    profile = load_scan_profile("wide")

    assert profile.grid_steps == 6
    assert profile.full_sphere
    assert profile.phi_steps == 12
    assert not profile.refine
    assert profile.refine_tolerance == 1e-6


def test_json_profile_is_loaded(profiles_dir: Path) -> None:
    (profiles_dir / "tiny.json").write_text(json.dumps({"grid_steps": 2}), encoding="utf-8")

    assert load_scan_profile("tiny").grid_steps == 2
    assert "tiny" in list_available_profiles()


def test_packaged_yaml_files_match_presets(profiles_dir: Path) -> None:
    for path in PACKAGED.glob("*.yaml"):
        shutil.copy(path, profiles_dir / f"copy-{path.name}")
        assert load_scan_profile(f"copy-{path.stem}") == SCAN_PROFILES[path.stem]


def test_profiles_directory_precedence(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.delenv("MARGINAL_BELL_PROFILES", raising=False)
    monkeypatch.chdir(tmp_path)
    assert find_profiles_directory() == PACKAGED

    (tmp_path / "profiles").mkdir()
    assert find_profiles_directory() == Path("./profiles")

    monkeypatch.setenv("MARGINAL_BELL_PROFILES", "/elsewhere")
    assert find_profiles_directory() == Path("/elsewhere")


def test_list_available_profiles_includes_presets() -> None:
    names = list_available_profiles(PACKAGED)

    assert {"coarse", "default", "fine", "full-sphere"} <= set(names)
    assert names == sorted(names)


def test_configured_grid_steps_apply_without_explicit_profile() -> None:
    config = MarginalBellConfig()
    config.scan.grid_steps = 4
    set_config(config)

    report = violation_scan(n_party_hardy(2), singlet(), refine=False)

    assert report.grid_steps == 4


def test_explicit_profile_uses_its_own_grid() -> None:
    config = MarginalBellConfig()
    config.scan.grid_steps = 6
    set_config(config)

    report = violation_scan(n_party_hardy(2), singlet(), profile="coarse", refine=False)

    assert report.grid_steps == 4


def test_grid_steps_argument_overrides_profile() -> None:
    report = violation_scan(n_party_hardy(2), singlet(), 4, profile="fine", refine=False)

    assert report.grid_steps == 4
