import io
import json
import math
from pathlib import Path
from typing import Any, List

import pytest

from marginal_bell.cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main, resolve_form
from marginal_bell.codec import AxesModel, LinearFormModel
from marginal_bell.core import get_config
from marginal_bell.inequality import evaluate, n_party_hardy
from marginal_bell.quantum import born_marginals, singlet

CHSH_MINIMUM = 2.0 - 2.0 * math.sqrt(2.0)

REFUTED_FORM = json.dumps(
    {
        "scenario": {"parties": 2, "settings": 2},
        "terms": [
            {"settings": [0, 0], "outcomes": [0, 0]},
            {"settings": [1, 1], "outcomes": [0, 0], "coef": -1},
        ],
    }
)

NEGATED_TERM = json.dumps(
    {
        "scenario": {"parties": 2, "settings": 2},
        "terms": [{"settings": [0, 0], "outcomes": [0, 0], "coef": -1}],
    }
)

CLOSED_FORM_AXES = json.dumps(
    {
        "axes": [
            [{"theta": 0.0}, {"theta": math.pi / 2}],
            [{"theta": math.pi / 4}, {"theta": 3 * math.pi / 4}],
        ]
    }
)


def _pr_box() -> str:
    tables = []
    for a in (0, 1):
        for b in (0, 1):
            keys = ("01", "10") if a and b else ("00", "11")
            tables.append(
                {"settings": [a, b], "probs": {key: {"num": 1, "den": 2} for key in keys}}
            )
    return json.dumps({"tables": tables})


def _uniform() -> str:
    tables = [
        {"settings": [a, b], "probs": {key: 0.25 for key in ("00", "01", "10", "11")}}
        for a in (0, 1)
        for b in (0, 1)
    ]
    return json.dumps({"tables": tables})


def _digest(path: Path) -> str:
    return str(json.loads(path.read_text(encoding="utf-8"))["inputs_digest"])


def _lines(capsys: pytest.CaptureFixture[str]) -> List[Any]:
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]


def test_certify_named_form(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["certify", "hardy-2"]) == EXIT_OK

    (payload,) = _lines(capsys)
    assert payload["verdict"] == "proven"
    assert payload["form"]["name"] == "hardy-2"
    assert "witness" not in payload


def test_certify_inline_form_is_refuted(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["certify", REFUTED_FORM]) == EXIT_FAILED

    (payload,) = _lines(capsys)
    assert payload["verdict"] == "refuted"
    assert payload["witness"] == [1, 0]


def test_certify_form_from_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    path = tmp_path / "form.json"
    path.write_text(REFUTED_FORM, encoding="utf-8")

    assert main(["certify", str(path), "--format", "text"]) == EXIT_FAILED

    out = capsys.readouterr().out
    assert out.startswith("refuted: ")
    assert "witness cell: [1, 0]" in out


def test_certify_with_zero_assumption(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["certify", NEGATED_TERM]) == EXIT_FAILED
    assert main(["certify", NEGATED_TERM, "--zero", "00:00"]) == EXIT_OK

    verdicts = [payload["verdict"] for payload in _lines(capsys)]
    assert verdicts == ["refuted", "proven"]


def test_certify_text_output(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["certify", "hardy-2", "--format", "text"]) == EXIT_OK

    assert capsys.readouterr().out == (
        "proven: -P_00(0,0) + P_01(0,0) + P_10(0,0) + P_11(1,1) >= 0\n"
    )


def test_bad_term_spec_is_usage_error() -> None:
    assert main(["certify", "hardy-2", "--zero", "0:00"]) == EXIT_USAGE


def test_unknown_form_file_is_usage_error() -> None:
    assert main(["certify", "no-such-form.json"]) == EXIT_USAGE


def test_malformed_json_is_usage_error() -> None:
    assert main(["certify", "{not json"]) == EXIT_USAGE


def test_catalog_streams_every_hardy_form(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["catalog", "hardy64"]) == EXIT_OK

    lines = _lines(capsys)
    assert len(lines) == 64
    assert {line["verdict"] for line in lines} == {"proven"}
    assert len({line["name"] for line in lines}) == 64


def test_catalog_chsh_and_nhardy(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["catalog", "chsh"]) == EXIT_OK
    assert len(_lines(capsys)) == 8

    assert main(["catalog", "nhardy:4", "--format", "text"]) == EXIT_OK
    assert "hardy-4" in capsys.readouterr().out


def test_catalog_unknown_family() -> None:
    assert main(["catalog", "bell"]) == EXIT_USAGE


def test_deduce_from_flags(capsys: pytest.CaptureFixture[str]) -> None:
    args = ["deduce", "--target", "00:00", "--zero", "10:00", "--zero", "01:00", "--zero", "11:11"]

    assert main(args) == EXIT_OK

    (payload,) = _lines(capsys)
    assert payload["deducible"] is True


def test_deduce_reports_uncovered_cell(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["deduce", "--target", "00:00", "--zero", "10:00", "--format", "text"]) == EXIT_FAILED

    out = capsys.readouterr().out
    assert "not deducible" in out
    assert "uncovered cell: [0, 1]" in out


def test_deduce_from_request_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    request = {
        "scenario": {"parties": 3, "settings": 2},
        "zeros": [
            {"settings": [1, 0, 0], "outcomes": [0, 0, 0]},
            {"settings": [0, 1, 0], "outcomes": [0, 0, 0]},
            {"settings": [0, 0, 1], "outcomes": [0, 0, 0]},
            {"settings": [1, 1, 1], "outcomes": [1, 1, 1]},
        ],
        "target": {"settings": [0, 0, 0], "outcomes": [0, 0, 0]},
    }
    path = tmp_path / "request.json"
    path.write_text(json.dumps(request), encoding="utf-8")

    assert main(["deduce", str(path)]) == EXIT_OK


def test_deduce_needs_target() -> None:
    assert main(["deduce", "--zero", "10:00"]) == EXIT_USAGE


def test_search_finds_hardy(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["search", "-k", "3", "--target", "00:00"]) == EXIT_OK

    forms = [LinearFormModel.model_validate(line).to_domain() for line in _lines(capsys)]
    keys = {form.canonical_key() for form in forms}
    assert n_party_hardy(2).canonical_key() in keys


def test_search_with_single_term_finds_nothing(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["search", "-k", "1", "--target", "00:00"]) == EXIT_OK

    assert capsys.readouterr().out == ""


def test_search_limit_flag_reaches_config() -> None:
    assert main(["search", "-k", "2", "--limit", "7"]) == EXIT_OK

    assert get_config().search.limit == 7


def test_quantum_eval_marginals_only(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["quantum-eval", '{"axes": [["z", "x"], ["z", "x"]]}']) == EXIT_OK

    (payload,) = _lines(capsys)
    tables = payload["marginals"]["tables"]
    assert len(tables) == 4
    assert tables[0]["probs"]["00"] == pytest.approx(0.0, abs=1e-12)
    assert tables[0]["probs"]["01"] == pytest.approx(0.5)


def test_quantum_eval_with_form(capsys: pytest.CaptureFixture[str]) -> None:
    expected = float(
        evaluate(
            resolve_form("chsh[01:lower]"),
            born_marginals(singlet(), AxesModel.model_validate_json(CLOSED_FORM_AXES).to_domain()),
        )
    )

    code = main(["quantum-eval", CLOSED_FORM_AXES, "--state", "singlet", "--form", "chsh[01:lower]"])

    (payload,) = _lines(capsys)
    assert payload["form"] == "chsh[01:lower]"
    assert payload["value"] == pytest.approx(expected)
    assert payload["violated"] is (expected < 0)
    assert code == (EXIT_FAILED if expected < 0 else EXIT_OK)


def test_quantum_eval_party_mismatch(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["quantum-eval", '{"axes": [["z", "x"], ["z", "x"]]}', "--state", "ghz"]) == EXIT_USAGE


def test_scan_chsh_on_coarse_grid(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["scan", "chsh[00:upper]", "--grid-steps", "4", "--no-refine"])

    assert code == EXIT_FAILED
    (payload,) = _lines(capsys)
    assert payload["strategy"] == "exhaustive"
    assert payload["grid_points"] == 14**4
    assert payload["best_value"] == pytest.approx(CHSH_MINIMUM, abs=1e-9)
    assert payload["violated"] is True


def test_scan_ghz(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["scan", "ghz"]) == EXIT_FAILED

    (payload,) = _lines(capsys)
    assert payload["lhs"] == pytest.approx(-4.0)
    assert payload["classical_corollary_holds"] is True


def test_scan_hardy_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["scan", "hardy", "--grid-steps", "100", "--format", "text"]) == EXIT_FAILED

    assert capsys.readouterr().out.startswith("P_00(0,0) = 0.0")


def test_scan_unknown_profile() -> None:
    assert main(["scan", "chsh[00:upper]", "--profile", "nope"]) == EXIT_USAGE


def test_scan_refuses_form_without_local_proof(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["scan", REFUTED_FORM, "--grid-steps", "2"]) == EXIT_USAGE

    assert "not a local inequality" in capsys.readouterr().err


def test_membership_local_marginals(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["membership", _uniform()]) == EXIT_OK

    (payload,) = _lines(capsys)
    assert payload["verdict"] == "feasible"
    assert payload["witness"]["mode"] == "float"


def test_membership_pr_box_names_violated_form(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["membership", _pr_box()]) == EXIT_FAILED

    (payload,) = _lines(capsys)
    assert payload["verdict"] == "infeasible"
    assert payload["hint"] == "chsh[11:upper]"
    assert payload["hint_value"] == {"num": -2, "den": 1}


def test_membership_float_mode_from_stdin(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setattr("sys.stdin", io.StringIO(_pr_box()))

    assert main(["membership", "-", "--mode", "float", "--format", "text"]) == EXIT_FAILED

    out = capsys.readouterr().out
    assert out.startswith("infeasible")
    assert "violated: " in out


def test_membership_rational_mode_rejects_floats() -> None:
    assert main(["membership", _uniform(), "--mode", "rational"]) == EXIT_USAGE


def test_membership_pivot_limit_is_a_solver_failure(capsys: pytest.CaptureFixture[str]) -> None:
    Path("marginal-bell.toml").write_text("[polytope]\nmax_pivots = 1\n", encoding="utf-8")

    assert main(["membership", _pr_box()]) == EXIT_FAILED

    err = capsys.readouterr().err
    assert "[ERROR] solver failed" in err
    assert "max_pivots" in err


def test_render_form_as_svg(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["render", "hardy-2", "--format", "svg", "--cell-size", "10"]) == EXIT_OK

    out = capsys.readouterr().out
    assert out.startswith("<svg")
    assert 'width="60"' in out


def test_render_marginal_as_ascii_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["render", "--marginal", "10:00", "--format", "text", "--ascii"]) == EXIT_OK

    out = capsys.readouterr().out
    assert out
    assert all(ord(ch) < 128 for ch in out)


def test_render_writes_output_file(tmp_path: Path) -> None:
    target = tmp_path / "family.txt"

    assert main(["render", "--family", "--format", "text", "-o", str(target)]) == EXIT_OK

    assert target.read_text(encoding="utf-8").count("\n\n") == 3


def test_render_needs_something_to_draw() -> None:
    assert main(["render"]) == EXIT_USAGE


def test_profiles_lists_packaged_profiles(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["profiles"]) == EXIT_OK

    names = [line["name"] for line in _lines(capsys)]
    assert "default" in names


def test_reproduce_single_criterion(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["reproduce", "--only", "1"]) == EXIT_OK

    (payload,) = _lines(capsys)
    assert payload["number"] == 1
    assert payload["passed"] is True


def test_reproduce_unknown_criterion() -> None:
    assert main(["reproduce", "--only", "99"]) == EXIT_USAGE


def test_run_report_is_written(tmp_path: Path) -> None:
    report = tmp_path / "run.json"

    assert main(["certify", "hardy-2", "--report", str(report)]) == EXIT_OK

    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["command"] == "certify"
    assert len(data["inputs_digest"]) == 64
    assert data["results"]["verdict"] == "proven"
    assert "total_seconds" in data["timings"]


def test_run_report_digest_ignores_output_flags(tmp_path: Path) -> None:
    first, second = tmp_path / "a.json", tmp_path / "b.json"

    main(["certify", "hardy-2", "--report", str(first)])
    main(["certify", "hardy-2", "--report", str(second), "-q"])

    assert _digest(first) == _digest(second)


def test_missing_explicit_config_is_usage_error() -> None:
    assert main(["profiles", "--config", "missing.toml"]) == EXIT_USAGE

