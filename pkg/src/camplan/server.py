"""HTTP service exposing the planner to clients.

Stateless by design: every request carries its floorplan and settings, and
all work happens per-request (sync endpoints run in the framework's thread
pool, so concurrent requests don't share solver state). Domain errors map
to structured 400 payloads: {"error": {"type": ..., "message": ...}}.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool

from . import __version__
from .errors import ConfigError, PlanningError
from .geometry import Point2
from .planner import (
    PlanReport,
    constraints_from_payload,
    coverage_region_at,
    load_floorplan,
    load_placements,
    parse_plan_request,
    plan,
    sampling_from_payload,
    solution_document,
    verify_placements,
)


def _error_payload(err: Exception) -> dict[str, Any]:
    return {"error": {"type": type(err).__name__, "message": str(err)}}


def _plan_payload(report: PlanReport) -> dict[str, Any]:
    sol = report.solution
    return {
        "solution": solution_document(report),
        "boundary": [[b.position.x, b.position.y] for b in report.boundary],
        "covered": list(report.covered),
        "missed": list(report.missed),
        "coverage_regions": [
            [[x, y] for x, y in report.coverage_geometry[c]] for c in sol.chosen
        ],
        "effective_d_min": report.effective_d_min,
    }


def create_app(static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="camplan", version=__version__, docs_url=None, redoc_url=None)

    @app.exception_handler(PlanningError)
    def planning_error(_request: Request, err: PlanningError) -> JSONResponse:
        return JSONResponse(status_code=400, content=_error_payload(err))

    async def _body(request: Request) -> dict:
        try:
            payload = await request.json()
        except json.JSONDecodeError as err:
            raise ConfigError(f"request body is not valid JSON: {err.msg}") from err
        if not isinstance(payload, dict):
            raise ConfigError("request body must be a JSON object")
        return payload

    @app.get("/api/health")
    def health() -> dict[str, str]:
        return {"status": "ok", "version": __version__}

    @app.post("/api/plan")
    async def api_plan(request: Request) -> JSONResponse:
        payload = await _body(request)
        req = parse_plan_request(payload)
        report = await run_in_threadpool(plan, req)
        return JSONResponse(_plan_payload(report))

    @app.post("/api/verify")
    async def api_verify(request: Request) -> JSONResponse:
        payload = await _body(request)
        if "floorplan" not in payload:
            raise ConfigError("verify request missing 'floorplan'")
        f = load_floorplan(payload["floorplan"])
        placements = (
            load_placements(payload) if payload.get("placements") is not None else []
        )
        sampling = sampling_from_payload(payload.get("sampling", {}) or {})
        constraints = constraints_from_payload(payload.get("constraints", {}) or {})
        report = await run_in_threadpool(
            verify_placements, f, placements, sampling, constraints
        )
        return JSONResponse(
            {
                "boundary": [[b.position.x, b.position.y] for b in report.boundary],
                "covered": list(report.covered),
                "missed": list(report.missed),
                "per_camera": [
                    list(report.per_camera[i]) for i in range(len(report.placements))
                ],
                "effective_d_min": report.effective_d_min,
            }
        )

    @app.post("/api/visibility")
    async def api_visibility(request: Request) -> JSONResponse:
        payload = await _body(request)
        if "floorplan" not in payload:
            raise ConfigError("visibility request missing 'floorplan'")
        f = load_floorplan(payload["floorplan"])
        raw = payload.get("point")
        if (
            not isinstance(raw, (list, tuple))
            or len(raw) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw)
        ):
            raise ConfigError("'point' must be an [x, y] number pair")
        constraints = constraints_from_payload(payload.get("constraints", {}) or {})
        region = await run_in_threadpool(
            coverage_region_at, f, Point2(float(raw[0]), float(raw[1])), constraints
        )
        return JSONResponse({"region": [[x, y] for x, y in region]})

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
