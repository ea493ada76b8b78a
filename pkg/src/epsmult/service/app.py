"""FastAPI application wrapping the analysis pipelines."""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..analysis import (
    FORMAT_VERSION,
    AnalysisParams,
    analyze_semigroup,
    build_report,
    params_from_mapping,
    verify_semigroup_limit,
)
from ..cache import SequenceCache
from ..errors import EngineError, IngestionError
from ..instances import (
    parse_field_document,
    parse_ideal_document,
    parse_module_document,
    parse_pair_document,
)
from .models import (
    ErrorBody,
    HealthResponse,
    IdealRequest,
    ModuleRequest,
    OkounkovVerifyRequest,
    OkounkovVerifyResponse,
    PairRequest,
    ReportResponse,
    SemigroupAnalyzeRequest,
    SemigroupAnalyzeResponse,
)

_STATUS = {
    "ingestion-error": 422,
    "hypothesis-refused": 409,
    "budget-exceeded": 400,
    "internal-invariant": 500,
}


def _params(model, instance_weights=None) -> AnalysisParams:
    data = model.model_dump()
    params = params_from_mapping(data)
    if params.weights is None and instance_weights:
        params.weights = list(instance_weights)
    return params


def create_app(cache_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="epsmult service", version=FORMAT_VERSION)
    cache = SequenceCache(cache_dir)

    @app.exception_handler(EngineError)
    async def engine_error_handler(request: Request, exc: EngineError):
        body = ErrorBody(error_code=exc.code, message=str(exc), witness=exc.witness)
        return JSONResponse(status_code=_STATUS.get(exc.code, 500), content=body.model_dump())

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        body = ErrorBody(error_code="ingestion-error", message=str(exc.errors()[:3]))
        return JSONResponse(status_code=422, content=body.model_dump())

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", format_version=FORMAT_VERSION)

    @app.post("/v1/epsilon/pair", response_model=ReportResponse)
    def epsilon_pair(req: PairRequest) -> ReportResponse:
        doc = req.instance.model_dump(exclude={"weights"})
        pair = parse_pair_document(doc)
        params = _params(req.params, req.instance.weights)
        case = "field" if pair.d == 0 else "pair"
        return ReportResponse(report=build_report(pair, case, params, cache))

    @app.post("/v1/epsilon/ideal", response_model=ReportResponse)
    def epsilon_ideal(req: IdealRequest) -> ReportResponse:
        pair = parse_ideal_document(req.instance.model_dump(exclude={"weights"}))
        params = _params(req.params, req.instance.weights)
        return ReportResponse(report=build_report(pair, "ideal", params, cache))

    @app.post("/v1/epsilon/module", response_model=ReportResponse)
    def epsilon_module(req: ModuleRequest) -> ReportResponse:
        doc = req.instance.model_dump(exclude={"weights"})
        doc["generators"] = [list(g) for g in doc.get("generators", [])]
        pair = parse_module_document(doc)
        params = _params(req.params, req.instance.weights)
        return ReportResponse(report=build_report(pair, "module", params, cache))

    @app.post("/v1/epsilon/field", response_model=ReportResponse)
    def epsilon_field(req: PairRequest) -> ReportResponse:
        pair = parse_field_document(req.instance.model_dump(exclude={"weights"}))
        params = _params(req.params, req.instance.weights)
        return ReportResponse(report=build_report(pair, "field", params, cache))

    @app.post("/v1/semigroup/analyze", response_model=SemigroupAnalyzeResponse)
    def semigroup_analyze(req: SemigroupAnalyzeRequest) -> SemigroupAnalyzeResponse:
        gens = [tuple(g) for g in req.generators]
        return SemigroupAnalyzeResponse(analysis=analyze_semigroup(gens, req.n_max))

    @app.post("/v1/okounkov/verify", response_model=OkounkovVerifyResponse)
    def okounkov_verify(req: OkounkovVerifyRequest) -> OkounkovVerifyResponse:
        gens = [tuple(g) for g in req.generators]
        try:
            tol = Fraction(req.tol)
        except (ValueError, ZeroDivisionError) as exc:
            raise IngestionError(f"unparseable tolerance {req.tol!r}") from exc
        return OkounkovVerifyResponse(
            verification=verify_semigroup_limit(gens, req.n_max, tol)
        )

    return app
