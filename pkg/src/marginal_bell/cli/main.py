#!/usr/bin/env python3
"""
marginal-bell CLI - certify, search and test Bell inequalities over marginal probabilities.

Usage:
    marginal-bell certify hardy-2
    marginal-bell catalog hardy64 | jq .verdict
    marginal-bell scan 'chsh[00:upper]' --state singlet
    marginal-bell membership marginals.json --mode rational
    marginal-bell render hardy-2 --format svg > hardy.svg
    marginal-bell reproduce
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from marginal_bell import __version__
from marginal_bell.codec import (
    AxesModel,
    CertificateModel,
    DeductionModel,
    DeductionRequest,
    GhzReportModel,
    HardyScanModel,
    LinearFormModel,
    MarginalSetModel,
    MembershipResultModel,
    PureStateModel,
    ViolationReportModel,
    dump_json,
    number_to_wire,
)
from marginal_bell.core import (
    ArithmeticMode,
    MarginalBellConfig,
    MarginalSet,
    Scenario,
    set_config,
)
from marginal_bell.inequality import (
    LinearForm,
    MarginalTerm,
    bell_corollary_form,
    catalog_hardy,
    certify,
    chsh_catalog,
    evaluate,
    hardy_deduce,
    n_party_hardy,
    search_covers,
    term,
    three_axes_form,
    zukowski_form,
)
from marginal_bell.polytope import membership
from marginal_bell.quantum import (
    NAMED_STATES,
    PureState,
    born_marginals,
    ghz,
    ghz_check,
    hardy_scan,
    list_available_profiles,
    load_scan_profile,
    violation_scan,
)
from marginal_bell.render import (
    OutputFormat,
    diagram_of_form,
    diagram_of_marginal,
    emit,
    emit_family,
    marginal_family,
)

from .config import build_config
from .report import build_run_report, reproduce

logger = logging.getLogger("marginal_bell.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

FAMILIES = ("hardy64", "chsh", "nhardy:N", "zukowski", "threeaxes")


class UsageError(ValueError):
    """Bad command-line input that is not a library error."""


def configure_logging(debug: bool, quiet: bool) -> None:
    """Stderr handler with the ``[LEVEL] message`` prefix."""

    level = logging.DEBUG if debug else logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)


def write_line(payload: Any) -> None:
    sys.stdout.write(dump_json(payload) + "\n")


def read_json_arg(value: str) -> str:
    """``-`` reads stdin, text starting with ``{`` or ``[`` is inline JSON, anything else a path."""

    if value == "-":
        return sys.stdin.read()
    if value.lstrip().startswith(("{", "[")):
        return value
    return Path(value).read_text(encoding="utf-8")


def parse_term_spec(spec: str, coefficient: int = 1) -> MarginalTerm:
    """``SETTINGS:OUTCOMES`` such as ``10:00`` for P_10(0,0)."""

    match = re.fullmatch(r"(\d+):([01]+)", spec.strip())
    if not match or len(match.group(1)) != len(match.group(2)):
        raise UsageError(f"term {spec!r} must look like SETTINGS:OUTCOMES, e.g. 10:00")
    return term(
        tuple(int(ch) for ch in match.group(1)),
        tuple(int(ch) for ch in match.group(2)),
        coefficient,
    )


def named_forms() -> Dict[str, LinearForm]:
    forms: Dict[str, LinearForm] = {}
    for form in catalog_hardy() + chsh_catalog():
        forms[form.name] = form
    for form in (zukowski_form(), three_axes_form(), bell_corollary_form()[0]):
        forms[form.name] = form
    return forms


def resolve_form(spec: str) -> LinearForm:
    """A catalog name (``hardy-3``, ``chsh[00:upper]``, ``zukowski`` ...) or LinearForm JSON."""

    match = re.fullmatch(r"hardy-(\d+)", spec)
    if match:
        return n_party_hardy(int(match.group(1)))
    forms = named_forms()
    if spec in forms:
        return forms[spec]
    return LinearFormModel.model_validate_json(read_json_arg(spec)).to_domain()


def resolve_state(spec: Optional[str], parties: int) -> PureState:
    """Named state (``singlet``, ``ghz``, ``ghz:N``) or amplitude JSON; defaults by party count."""

    if spec is None:
        return NAMED_STATES["singlet"]() if parties == 2 else ghz(parties)
    match = re.fullmatch(r"ghz:(\d+)", spec)
    if match:
        return ghz(int(match.group(1)))
    if spec in NAMED_STATES:
        return NAMED_STATES[spec]()
    text = read_json_arg(spec)
    data = json.loads(text)
    if isinstance(data, list):
        data = {"amplitudes": data}
    return PureStateModel.model_validate(data).to_domain()


def family_forms(name: str) -> Tuple[LinearForm, ...]:
    if name == "hardy64":
        return catalog_hardy()
    if name == "chsh":
        return chsh_catalog()
    if name == "zukowski":
        return (zukowski_form(),)
    if name == "threeaxes":
        return (three_axes_form(),)
    match = re.fullmatch(r"nhardy:(\d+)", name)
    if match:
        return (n_party_hardy(int(match.group(1))),)
    raise UsageError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")


def apply_mode(ms: MarginalSet, mode: Optional[str]) -> MarginalSet:
    if mode is None:
        return ms
    if ArithmeticMode(mode) is ArithmeticMode.FLOAT:
        return ms.to_float() if ms.mode is ArithmeticMode.RATIONAL else ms
    if ms.mode is ArithmeticMode.FLOAT:
        raise UsageError("marginal set holds floats; use --mode float")
    return ms


# -- commands -----------------------------------------------------------------


def cmd_certify(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    form = resolve_form(args.form)
    zeros = [parse_term_spec(spec).key for spec in args.zero]
    certificate = certify(form, zeros)
    model = CertificateModel.from_domain(certificate)
    if args.format == "text":
        print(f"{certificate.verdict.value}: {form.describe()}")
        if certificate.witness is not None:
            print(f"witness cell: {list(certificate.witness)}")
    else:
        write_line(model)
    return (EXIT_OK if certificate.proven else EXIT_FAILED), model.model_dump(mode="json")


def cmd_catalog(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    forms = family_forms(args.family)
    results = []
    for form in forms:
        verdict = certify(form).verdict.value
        entry = {"name": form.name, "verdict": verdict}
        if args.format == "text":
            print(f"{verdict:8} {form.name:24} {form.describe()}")
        else:
            write_line({**entry, "form": LinearFormModel.from_domain(form).model_dump(mode="json")})
        results.append(entry)
    logger.info("%d forms in %s", len(forms), args.family)
    proven = all(entry["verdict"] == "proven" for entry in results)
    return (EXIT_OK if proven else EXIT_FAILED), results


def cmd_deduce(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    if args.request:
        request = DeductionRequest.model_validate_json(read_json_arg(args.request))
        scenario = request.scenario.to_domain()
        zeros = [item.to_domain() for item in request.zeros]
        target = request.target.to_domain()
    else:
        if args.target is None:
            raise UsageError("deduce needs a request file or --target")
        scenario = Scenario(parties=args.parties, settings=args.settings)
        zeros = [parse_term_spec(spec) for spec in args.zero]
        target = parse_term_spec(args.target)
    deduction = hardy_deduce(scenario, zeros, target)
    model = DeductionModel.from_domain(deduction)
    if args.format == "text":
        state = "deducible" if deduction.deducible else "not deducible"
        print(f"{target.label()} = 0: {state}")
        if deduction.uncovered is not None:
            print(f"uncovered cell: {list(deduction.uncovered)}")
    else:
        write_line(model)
    return (EXIT_OK if deduction.deducible else EXIT_FAILED), model.model_dump(mode="json")


def cmd_search(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    scenario = Scenario(parties=args.parties, settings=args.settings)
    target = parse_term_spec(args.target) if args.target else None
    result = search_covers(scenario, args.k, target)
    for form in result.forms:
        if args.format == "text":
            print(form.describe())
        else:
            write_line(LinearFormModel.from_domain(form))
    logger.info(
        "%d proven forms from %d candidates%s",
        len(result.forms),
        result.examined,
        " (truncated)" if result.truncated else "",
    )
    return EXIT_OK, {"forms": len(result.forms), "examined": result.examined, "truncated": result.truncated}


def cmd_quantum_eval(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    axes = AxesModel.model_validate_json(read_json_arg(args.axes)).to_domain()
    state = resolve_state(args.state, axes.parties)
    ms = born_marginals(state, axes)
    payload: Dict[str, Any] = {"marginals": MarginalSetModel.from_domain(ms).model_dump(mode="json")}
    code = EXIT_OK
    if args.form:
        form = resolve_form(args.form)
        value = float(evaluate(form, ms))
        violated = value < -config.arithmetic.float_tolerance
        payload["form"] = form.name or form.describe()
        payload["value"] = value
        payload["violated"] = violated
        code = EXIT_FAILED if violated else EXIT_OK
    if args.format == "text":
        for table in ms.tables:
            probs = " ".join(f"{float(p):.6f}" for p in table.probs)
            print(f"P_{ms.scenario.label(table.settings)}: {probs}")
        if args.form:
            print(f"{payload['form']}: {payload['value']:.6f}")
    else:
        write_line(payload)
    return code, payload


def cmd_scan(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    model: BaseModel
    if args.target == "hardy":
        report = hardy_scan(args.grid_steps)
        model = HardyScanModel.from_domain(report)
        code = EXIT_FAILED if report.form_value < 0 else EXIT_OK
        summary = f"P_00(0,0) = {report.probability:.6f}"
    elif args.target == "ghz":
        ghz_report = ghz_check()
        model = GhzReportModel.from_domain(ghz_report)
        code = EXIT_FAILED if ghz_report.violated else EXIT_OK
        summary = f"C_111 - C_001 - C_010 - C_100 = {ghz_report.lhs:.6f} (bound {ghz_report.bound})"
    else:
        form = resolve_form(args.target)
        state = resolve_state(args.state, form.scenario.parties)
        scan = violation_scan(
            form,
            state,
            args.grid_steps,
            profile=args.profile,
            full_sphere=True if args.full_sphere else None,
            refine=False if args.no_refine else None,
        )
        model = ViolationReportModel.from_domain(scan)
        code = EXIT_FAILED if scan.violated else EXIT_OK
        summary = f"{model.form}: minimum {scan.best_value:.6f} ({scan.strategy})"
    if args.format == "text":
        print(summary)
    else:
        write_line(model)
    return code, model.model_dump(mode="json")


def cmd_membership(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    ms = MarginalSetModel.model_validate_json(read_json_arg(args.marginals)).to_domain()
    ms = apply_mode(ms, args.mode)
    result = membership(ms, args.tol)
    model = MembershipResultModel.from_domain(result)
    if args.format == "text":
        print(f"{result.verdict.value} (residual {result.residual:.3g})")
        if result.hint is not None:
            print(f"violated: {result.hint.describe()} at {number_to_wire(result.hint_value)}")
    else:
        write_line(model)
    return (EXIT_OK if result.feasible else EXIT_FAILED), model.model_dump(mode="json")


def cmd_render(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    fmt = OutputFormat.SVG if args.format == "svg" else OutputFormat.TEXT
    if args.family:
        scenario = Scenario(parties=args.parties, settings=args.settings)
        document = emit_family(marginal_family(scenario), fmt)
    elif args.marginal:
        item = parse_term_spec(args.marginal)
        scenario = Scenario(parties=len(item.settings), settings=args.settings)
        document = emit(diagram_of_marginal(scenario, item.settings, item.outcomes), fmt)
    elif args.form:
        document = emit(diagram_of_form(resolve_form(args.form)), fmt)
    else:
        raise UsageError("render needs a form, --marginal or --family")
    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
        logger.info("Wrote %s", args.output)
    else:
        sys.stdout.write(document)
    return EXIT_OK, {"format": fmt.value, "bytes": len(document.encode("utf-8"))}


def cmd_reproduce(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    results = reproduce(config, args.only)
    for result in results:
        if args.format == "text":
            mark = "PASS" if result.passed else "FAIL"
            print(f"{mark} {result.number:2d} {result.name:32} {result.seconds:8.2f}s")
        else:
            write_line(result.to_dict())
    passed = all(result.passed for result in results)
    logger.info("%d/%d criteria passed", sum(r.passed for r in results), len(results))
    return (EXIT_OK if passed else EXIT_FAILED), [result.to_dict() for result in results]


def cmd_profiles(args: argparse.Namespace, config: MarginalBellConfig) -> Tuple[int, Any]:
    entries = []
    for name in list_available_profiles():
        profile = load_scan_profile(name)
        entry = {
            "name": name,
            "grid_steps": profile.grid_steps,
            "full_sphere": profile.full_sphere,
            "description": profile.description,
        }
        if args.format == "text":
            print(f"{name:14} steps={profile.grid_steps:<3} {profile.description}")
        else:
            write_line(entry)
        entries.append(entry)
    return EXIT_OK, entries


Command = Callable[[argparse.Namespace, MarginalBellConfig], Tuple[int, Any]]


# -- parser -------------------------------------------------------------------


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="Config file (TOML/JSON/YAML)")
    common.add_argument("--no-config", action="store_true", help="Ignore config files")
    common.add_argument(
        "--mode", choices=["rational", "float"], help="Arithmetic for marginal input (default: as given)"
    )
    common.add_argument("--tol", type=float, metavar="EPS", help="Float tolerance (default: 1e-8 for LP)")
    common.add_argument(
        "--format", choices=["json", "text", "svg"], default="json", help="Output format (default: json)"
    )
    common.add_argument("--seed", type=int, help="Seed for sampled checks (default: 2024)")
    common.add_argument("--report", metavar="PATH", help="Write a run report JSON to PATH")
    common.add_argument("-q", "--quiet", action="store_true", help="Only warnings and errors on stderr")
    common.add_argument("--debug", action="store_true", help="Enable debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="marginal-bell",
        description="Bell inequalities among marginal probabilities: certificates, scans and membership",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  proven / feasible / all criteria pass
  1  refuted / violated / infeasible / a criterion failed
  2  usage or input error

Config precedence (low to high):
  Built-in defaults -> Config file -> Environment vars -> CLI arguments
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="Prove or refute a linear form")
    p.add_argument("form", help="Catalog name (hardy-2, chsh[00:upper], ...) or form JSON path/'-'")
    p.add_argument("--zero", action="append", default=[], metavar="S:O", help="Term assumed zero, e.g. 00:11")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("catalog", parents=[common], help="Stream a named family with verdicts")
    p.add_argument("family", help=f"One of {', '.join(FAMILIES)}")
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("deduce", parents=[common], help="Decide a Hardy-type zero deduction")
    p.add_argument("request", nargs="?", help="Deduction JSON (scenario, zeros, target)")
    p.add_argument("--parties", type=int, default=2)
    p.add_argument("--settings", type=int, default=2)
    p.add_argument("--zero", action="append", default=[], metavar="S:O")
    p.add_argument("--target", metavar="S:O")
    p.set_defaults(handler=cmd_deduce)

    p = sub.add_parser("search", parents=[common], help="Enumerate proven cover inequalities")
    p.add_argument("-k", type=int, required=True, help="Number of positive terms")
    p.add_argument("--parties", type=int, default=2)
    p.add_argument("--settings", type=int, default=2)
    p.add_argument("--target", metavar="S:O", help="Fix the negative term")
    p.add_argument("--limit", type=int, help="Candidate bound (default: 100000)")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("quantum-eval", parents=[common], help="Born-rule marginals for a state and axes")
    p.add_argument("axes", help="Axes JSON path, inline JSON or '-'")
    p.add_argument("--state", help="singlet, ghz, ghz:N or amplitudes JSON")
    p.add_argument("--form", help="Evaluate this form on the marginals")
    p.set_defaults(handler=cmd_quantum_eval)

    p = sub.add_parser("scan", parents=[common], help="Minimize a form over measurement axes")
    p.add_argument("target", help="Form name/JSON, or 'hardy' / 'ghz' for the dedicated checks")
    p.add_argument("--state", help="singlet, ghz, ghz:N or amplitudes JSON")
    p.add_argument("--grid-steps", type=int, help="Polar grid steps (default: profile)")
    p.add_argument("--profile", help="Scan profile name (see 'profiles')")
    p.add_argument("--full-sphere", action="store_true", help="Sample azimuths uniformly")
    p.add_argument("--no-refine", action="store_true", help="Skip continuous refinement")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("membership", parents=[common], help="Local-polytope membership of marginals")
    p.add_argument("marginals", help="MarginalSet JSON path, inline JSON or '-'")
    p.set_defaults(handler=cmd_membership)

    p = sub.add_parser("render", parents=[common], help="Draw a form or marginal on the cell grid")
    p.add_argument("form", nargs="?", help="Form name or JSON")
    p.add_argument("--marginal", metavar="S:O", help="Draw one marginal support")
    p.add_argument("--family", action="store_true", help="Draw every marginal of the scenario")
    p.add_argument("--parties", type=int, default=2)
    p.add_argument("--settings", type=int, default=2)
    p.add_argument("--ascii", action="store_true", help="ASCII box drawing")
    p.add_argument("--cell-size", type=int, help="SVG cell size in px (default: 24)")
    p.add_argument("-o", "--output", metavar="PATH", help="Write to PATH instead of stdout")
    p.set_defaults(handler=cmd_render)

    p = sub.add_parser("reproduce", parents=[common], help="Run the acceptance criteria")
    p.add_argument("--only", type=int, action="append", metavar="N", help="Run criterion N only")
    p.set_defaults(handler=cmd_reproduce)

    p = sub.add_parser("profiles", parents=[common], help="List scan profiles")
    p.set_defaults(handler=cmd_profiles)

    return parser


def _report_inputs(args: argparse.Namespace, config: MarginalBellConfig) -> Dict[str, Any]:
    values = {
        key: value
        for key, value in sorted(vars(args).items())
        if key not in {"handler", "report", "quiet", "debug"}
    }
    for key in ("form", "axes", "marginals", "request", "state"):
        value = values.get(key)
        if isinstance(value, str) and value != "-" and Path(value).is_file():
            values[key] = Path(value).read_text(encoding="utf-8")
    values["config"] = asdict(config)
    return values


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the marginal-bell CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.debug, args.quiet)

    try:
        config = set_config(build_config(args))
    except (OSError, ValueError) as exc:
        logger.error("Failed to load config: %s", exc)
        return EXIT_USAGE

    handler: Command = args.handler
    start = time.perf_counter()
    try:
        code, results = handler(args, config)
    except ValidationError as exc:
        logger.error("invalid input: %s", exc.errors()[0].get("msg", exc))
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        logger.error("malformed JSON: %s", exc)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except RuntimeError as exc:
        logger.error("solver failed: %s", exc)
        return EXIT_FAILED
    elapsed = time.perf_counter() - start

    if args.report:
        report = build_run_report(
            args.command, _report_inputs(args, config), results, {"total_seconds": round(elapsed, 3)}
        )
        Path(args.report).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info("Run report: %s", args.report)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
