"""HTTP service over the planning pipeline.

Stateless except for the run store; every response carries the active
config hash, every failure is a 400 with a stage-attributed violation
payload.
"""

from __future__ import annotations

import json

from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from medbuild.layout import LayoutParams, SiteTooSmall, generate_schemes, serialize_scheme_json
from medbuild.massing import MassingParams
from medbuild.program import PlanningConfig, generate_program, program_to_jsonable
from .pipeline import (
    PipelineError,
    RunStore,
    compute_outputs,
    parse_stage,
    program_stub_from_jsonable,
    run_pipeline,
    site_from_jsonable,
    violations_jsonable,
)


def _http_error(exc: PipelineError) -> HTTPException:
    return HTTPException(status_code=400, detail={
        "stage": exc.stage,
        "message": str(exc),
        "violations": exc.violations,
    })


def create_app(config: PlanningConfig, runs_dir: str,
               layout_params: LayoutParams = None,
               massing_params: MassingParams = None) -> FastAPI:
    layout_params = layout_params or LayoutParams()
    massing_params = massing_params or MassingParams()
    store = RunStore(runs_dir)
    app = FastAPI(title="medbuild", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    def _site_and_seed(body: dict):
        try:
            seed = int(body.get("seed", 0))
        except (TypeError, ValueError):
            raise _http_error(PipelineError("layout", "seed must be an integer"))
        try:
            site = site_from_jsonable(body.get("site"))
        except PipelineError as exc:
            raise _http_error(exc)
        return site, seed

    @app.post("/api/program")
    def post_program(body: dict = Body(default=None)):
        if not body or "dql" not in body:
            raise _http_error(PipelineError("parse", "request body needs a 'dql' field"))
        try:
            record, soft = parse_stage(body["dql"])
            program = generate_program(record, config)
        except PipelineError as exc:
            raise _http_error(exc)
        return {
            "config_hash": config.hash,
            "soft_violations": soft and violations_jsonable(soft) or [],
            "program": program_to_jsonable(program, config),
        }

    @app.post("/api/schemes")
    def post_schemes(body: dict = Body(default=None)):
        body = body or {}
        site, seed = _site_and_seed(body)
        try:
            if "program" in body:
                program = program_stub_from_jsonable(body["program"])
            elif "dql" in body:
                record, _ = parse_stage(body["dql"])
                program = generate_program(record, config)
            else:
                raise PipelineError("parse", "request body needs 'dql' or 'program'")
            pair = generate_schemes(program, site, seed, layout_params)
        except SiteTooSmall as exc:
            raise _http_error(PipelineError("layout", str(exc)))
        except PipelineError as exc:
            raise _http_error(exc)
        doc = json.loads(serialize_scheme_json(pair))
        doc["config_hash"] = config.hash
        doc["typologies"] = {"S1": pair.s1.typology, "S2": pair.s2.typology}
        return doc

    @app.post("/api/scene")
    def post_scene(body: dict = Body(default=None)):
        body = body or {}
        if "dql" not in body:
            raise _http_error(PipelineError("parse", "request body needs a 'dql' field"))
        site, seed = _site_and_seed(body)
        try:
            outputs = compute_outputs(body["dql"], site, seed, config,
                                      layout_params, massing_params)
        except PipelineError as exc:
            raise _http_error(exc)
        scenes = outputs["scenes"]
        wanted = body.get("scheme")
        if wanted is not None:
            if wanted not in scenes:
                raise _http_error(PipelineError("massing", f"no scheme {wanted!r}"))
            scenes = {wanted: scenes[wanted]}
        return {"config_hash": config.hash, "scenes": scenes}

    @app.post("/api/pipeline")
    def post_pipeline(body: dict = Body(default=None)):
        body = body or {}
        if "dql" not in body:
            raise _http_error(PipelineError("parse", "request body needs a 'dql' field"))
        site, seed = _site_and_seed(body)
        try:
            run = run_pipeline(body["dql"], site, seed, config, store,
                               layout_params, massing_params)
        except PipelineError as exc:
            raise _http_error(exc)
        return run.to_jsonable()

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        try:
            return store.load(run_id).to_jsonable()
        except KeyError:
            raise HTTPException(status_code=404, detail={"message": f"unknown run {run_id!r}"})

    @app.get("/api/config")
    def get_config():
        return JSONResponse({"config_hash": config.hash, "config": config.as_dict()})

    return app
