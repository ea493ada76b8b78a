"""Pydantic request/response models of the analysis service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class AnalysisParamsModel(BaseModel):
    n_max: Optional[int] = None
    c: Optional[int] = None
    c_max: int = 8
    window: Optional[int] = None
    tol: Optional[str] = None            # rational string, e.g. "1/50" or "0.02"
    check_gamma: bool = False
    weights: Optional[list[str]] = None  # rational strings, one per variable
    beta: Optional[str] = None
    cap: Optional[int] = None


class PairInstanceModel(BaseModel):
    base_variables: list[str]
    fiber_variables: list[str]
    delta: list[str] = Field(default_factory=list)
    subalgebra_generators: list[str] = Field(default_factory=list)
    weights: Optional[list[str]] = None


class IdealInstanceModel(BaseModel):
    variables: list[str]
    generators: list[str]
    weights: Optional[list[str]] = None


class ModuleInstanceModel(BaseModel):
    variables: list[str]
    rank: int
    generators: list[tuple[str, int]]    # [monomial, component] pairs
    weights: Optional[list[str]] = None


class PairRequest(BaseModel):
    instance: PairInstanceModel
    params: AnalysisParamsModel = Field(default_factory=AnalysisParamsModel)


class IdealRequest(BaseModel):
    instance: IdealInstanceModel
    params: AnalysisParamsModel = Field(default_factory=AnalysisParamsModel)


class ModuleRequest(BaseModel):
    instance: ModuleInstanceModel
    params: AnalysisParamsModel = Field(default_factory=AnalysisParamsModel)


class ReportResponse(BaseModel):
    report: dict[str, Any]


class SemigroupAnalyzeRequest(BaseModel):
    generators: list[list[int]]
    n_max: int = 40


class SemigroupAnalyzeResponse(BaseModel):
    analysis: dict[str, Any]


class OkounkovVerifyRequest(BaseModel):
    generators: list[list[int]]
    n_max: int = 200
    tol: str = "1/50"


class OkounkovVerifyResponse(BaseModel):
    verification: dict[str, Any]


class HealthResponse(BaseModel):
    status: str
    format_version: str


class ErrorBody(BaseModel):
    error_code: str
    message: str
    witness: Optional[str] = None
