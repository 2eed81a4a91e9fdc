"""HTTP JSON API over the analysis pipeline.

Stateless by design: every request carries its own data and seed, responses
are pure functions of the request body, and nothing is persisted. Long
simulations are deliberately not exposed here; run them through the CLI.
"""

from __future__ import annotations

import json
import os
import secrets
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .bayes import PriorSpec
from .decision import builtin_scales, select_interval
from .distributions import TruncatedNormalParams
from .intervals import SCORE_BOUNDS, BootstrapConfig, Method
from .report import SCHEMA_VERSION, build_payload
from .scoring import ResponseSheet, SheetValidationError, study_summary, sus_score

__all__ = ["create_app", "app"]

MAX_BODY_BYTES = 1 << 20  # 1 MiB request cap

_METHODS = {"auto", "t", "adjusted-t", "percentile", "bca", "expanded-bca", "bayes"}


class PriorOptions(BaseModel):
    prior_mean: float = 70.0
    prior_sd: float = Field(12.0, gt=0)
    sigma_upper: float = Field(30.0, gt=0)
    mu_steps: int = Field(1001, ge=2, le=20_000)
    sigma_steps: int = Field(600, ge=2, le=20_000)


class AnalyzeRequest(BaseModel):
    """Either raw questionnaire rows or pre-computed scores, plus options."""

    responses: list[list[int]] | None = None
    scores: list[float] | None = None
    omitted_item: int | None = Field(None, ge=1, le=10)
    clamp_nine_item: bool = False
    level: float = Field(0.95, gt=0, lt=1)
    method: str = "auto"
    bootstrap_samples: int = Field(10_000, ge=1, le=1_000_000)
    seed: int | None = Field(None, ge=0)
    prior: PriorOptions = PriorOptions()


def _semantic_error(detail):
    return JSONResponse(status_code=422, content={"error": {"message": detail}})


def _scores_from_request(req: AnalyzeRequest) -> list[float]:
    if (req.responses is None) == (req.scores is None):
        raise ValueError("provide exactly one of 'responses' or 'scores'")
    if req.scores is not None:
        if not req.scores:
            raise ValueError("scores list is empty")
        bad = [s for s in req.scores if not SCORE_BOUNDS[0] <= s <= SCORE_BOUNDS[1]]
        if bad:
            raise ValueError(f"score {bad[0]:g} outside [0, 100]")
        return list(req.scores)
    if not req.responses:
        raise ValueError("responses list is empty")
    widths = {len(row) for row in req.responses}
    if len(widths) > 1:
        raise ValueError("all response rows must have the same number of answers")
    scores = []
    for i, row in enumerate(req.responses, start=1):
        try:
            sheet = ResponseSheet(tuple(row), req.omitted_item if len(row) == 9 else None)
        except SheetValidationError as err:
            raise ValueError(f"row {i}: {err}")
        scores.append(sus_score(sheet, clamp=req.clamp_nine_item))
    return scores


def create_app() -> FastAPI:
    app = FastAPI(title="suskit", version=SCHEMA_VERSION, docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.middleware("http")
    async def cap_body_size(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > MAX_BODY_BYTES:
            return JSONResponse(status_code=413,
                                content={"error": {"message": "request body above 1 MiB"}})
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def field_errors(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err["loc"] if p != "body"), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400,
                            content={"error": {"message": "invalid request", "details": details}})

    @app.get("/healthz", response_class=PlainTextResponse)
    async def healthz() -> str:
        return "ok"

    @app.get("/api/scales")
    async def scales():
        from .report import _scale_entry

        return {"scales": [_scale_entry(s) for s in builtin_scales()]}

    @app.get("/api/schema")
    async def schema():
        text = resources.files("suskit").joinpath("data/result_schema.json").read_text("utf-8")
        return json.loads(text)

    @app.post("/api/analyze")
    async def analyze(req: AnalyzeRequest):
        if req.method not in _METHODS:
            return _semantic_error(f"unknown method {req.method!r}")
        try:
            scores = _scores_from_request(req)
            study = study_summary(scores)
            prior = PriorSpec(
                TruncatedNormalParams(req.prior.prior_mean, req.prior.prior_sd, *SCORE_BOUNDS),
                req.prior.sigma_upper,
            )
            seed = req.seed if req.seed is not None else secrets.randbits(32)
            cfg = BootstrapConfig(req.bootstrap_samples, seed)
            scales = builtin_scales()
            result = select_interval(study, req.level, cfg, prior, scales,
                                     mu_steps=req.prior.mu_steps,
                                     sigma_steps=req.prior.sigma_steps)
            reported = None if req.method == "auto" else Method(req.method)
            payload = build_payload(result, seed, req.level, scales, reported_method=reported)
        except ValueError as err:
            return _semantic_error(str(err))
        return JSONResponse(content=payload)

    ui_dir = os.environ.get("SUSKIT_UI_DIR")
    if not ui_dir:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = str(candidate) if candidate.is_dir() else None
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


app = create_app()
