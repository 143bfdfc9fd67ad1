"""JSON codec: pydantic schemas plus small file helpers."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Type, TypeVar

from pydantic import BaseModel

from .schemas import (
    AxesModel,
    BlochAxisModel,
    CellCoefficientModel,
    CertificateModel,
    DeductionModel,
    DeductionRequest,
    GhzReportModel,
    HardyScanModel,
    LinearFormModel,
    MarginalSetModel,
    MarginalTableModel,
    MembershipResultModel,
    NumberValue,
    PureStateModel,
    RationalModel,
    RunReportModel,
    ScenarioModel,
    TermModel,
    UnderlyingDistModel,
    ViolationReportModel,
    WeightEntry,
    number_from_wire,
    number_to_wire,
    outcome_key,
    parse_outcome_key,
)

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_model(source: str | Path, model: Type[ModelT]) -> ModelT:
    """Parse a JSON file into ``model``; ``-`` is not special here, callers read stdin themselves."""

    text = Path(source).read_text(encoding="utf-8")
    return model.model_validate_json(text)


def dump_model(model: BaseModel) -> str:
    """One-line JSON in field order, suitable for NDJSON streams."""

    return model.model_dump_json(exclude_none=True)


def dump_json(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        return dump_model(payload)
    return json.dumps(payload, separators=(",", ":"))


__all__ = [
    "AxesModel",
    "BlochAxisModel",
    "CellCoefficientModel",
    "CertificateModel",
    "DeductionModel",
    "DeductionRequest",
    "GhzReportModel",
    "HardyScanModel",
    "LinearFormModel",
    "MarginalSetModel",
    "MarginalTableModel",
    "MembershipResultModel",
    "NumberValue",
    "PureStateModel",
    "RationalModel",
    "RunReportModel",
    "ScenarioModel",
    "TermModel",
    "UnderlyingDistModel",
    "ViolationReportModel",
    "WeightEntry",
    "dump_json",
    "dump_model",
    "load_model",
    "number_from_wire",
    "number_to_wire",
    "outcome_key",
    "parse_outcome_key",
]
