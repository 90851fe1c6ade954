"""Pipeline composition and run persistence.

A run is parse -> validate -> program -> schemes -> scene per scheme.  The
outputs are a pure function of (dql, site, seed, config); the run store
keeps them as JSON documents, one file per run, written atomically.
"""

from __future__ import annotations

import json
import math
import os
import secrets
import tempfile
import time
from dataclasses import dataclass
from hashlib import sha256
from types import SimpleNamespace

from medbuild.dql import DqlError, parse_dql, validate
from medbuild.layout import (
    LayoutParams,
    SitePolygon,
    SiteTooSmall,
    serialize_scheme_json,
    generate_schemes,
)
from medbuild.massing import (
    MassingParams,
    ZeroCapacity,
    allocate_rooms,
    calculate_optimal_floor_plan,
    scene_to_jsonable,
    synthesize_scene,
)
from medbuild.program import DomainError, PlanningConfig, generate_program, program_to_jsonable


class PipelineError(Exception):
    """Failure attributed to one pipeline stage."""

    def __init__(self, stage: str, message: str, violations=None):
        self.stage = stage
        self.violations = violations or []
        super().__init__(f"[{stage}] {message}")


@dataclass
class PipelineRun:
    run_id: str
    inputs: dict
    outputs: dict
    config_hash: str
    created_at: float

    def to_jsonable(self) -> dict:
        return {
            "run_id": self.run_id,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "config_hash": self.config_hash,
            "created_at": self.created_at,
        }

    @staticmethod
    def from_jsonable(doc: dict) -> "PipelineRun":
        return PipelineRun(
            run_id=doc["run_id"],
            inputs=doc["inputs"],
            outputs=doc["outputs"],
            config_hash=doc["config_hash"],
            created_at=doc["created_at"],
        )


def violations_jsonable(violations) -> list:
    return [{"severity": v.severity, "path": v.path, "message": v.message}
            for v in violations]


def parse_stage(dql_text: str):
    """Parse and validate; hard violations abort with stage=parse."""
    try:
        record = parse_dql(dql_text)
    except DqlError as exc:
        raise PipelineError("parse", str(exc))
    violations = validate(record)
    hard = [v for v in violations if v.severity == "hard"]
    if hard:
        raise PipelineError("parse", "record fails validation",
                            violations_jsonable(hard))
    return record, [v for v in violations if v.severity == "soft"]


def compute_outputs(dql_text: str, site: SitePolygon, seed: int,
                    config: PlanningConfig,
                    layout_params: LayoutParams = None,
                    massing_params: MassingParams = None) -> dict:
    """The deterministic payload shared by CLI and service."""
    layout_params = layout_params or LayoutParams()
    massing_params = massing_params or MassingParams()
    record, soft = parse_stage(dql_text)
    try:
        program = generate_program(record, config)
    except DomainError as exc:
        raise PipelineError("program", str(exc))
    try:
        pair = generate_schemes(program, site, seed, layout_params)
    except SiteTooSmall as exc:
        raise PipelineError("layout", str(exc))
    scenes = {}
    for scheme in (pair.s1, pair.s2):
        try:
            floors, stop_reason = calculate_optimal_floor_plan(
                program, scheme, massing_params)
            kept, unallocated = allocate_rooms(
                program, floors, massing_params, config.priority_rank)
        except ZeroCapacity as exc:
            raise PipelineError("massing", str(exc))
        scene = synthesize_scene(kept, unallocated, massing_params, {
            "scheme": scheme.id,
            "typology": scheme.typology,
            "seed": seed,
            "config_hash": config.hash,
            "stop_reason": stop_reason,
            "program": {
                "level": program.level,
                "beds": program.beds.target_total,
                "net_area": round(program.net_area(), 3),
                "total_rooms": program.total_rooms,
            },
        })
        scenes[scheme.id] = scene_to_jsonable(scene)
    return {
        "config_hash": config.hash,
        "soft_violations": violations_jsonable(soft),
        "program": program_to_jsonable(program, config),
        "schemes": json.loads(serialize_scheme_json(pair)),
        "typologies": {"S1": pair.s1.typology, "S2": pair.s2.typology},
        "scenes": scenes,
    }


def canonical_output_bytes(outputs: dict) -> bytes:
    """Stable byte encoding, identical across CLI and HTTP paths."""
    return (json.dumps(outputs, sort_keys=True, indent=2) + "\n").encode()


def input_hash(dql_text: str, site: SitePolygon, seed: int) -> str:
    doc = {
        "dql": dql_text,
        "site": [list(v) for v in site.vertices],
        "seed": seed,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return sha256(blob).hexdigest()[:16]


def run_pipeline(dql_text: str, site: SitePolygon, seed: int,
                 config: PlanningConfig, store: "RunStore" = None,
                 layout_params: LayoutParams = None,
                 massing_params: MassingParams = None) -> PipelineRun:
    outputs = compute_outputs(dql_text, site, seed, config,
                              layout_params, massing_params)
    run = PipelineRun(
        run_id=f"{input_hash(dql_text, site, seed)}-{secrets.token_hex(4)}",
        inputs={
            "dql": dql_text,
            "site": {"vertices": [list(v) for v in site.vertices]},
            "seed": seed,
        },
        outputs=outputs,
        config_hash=config.hash,
        created_at=time.time(),
    )
    if store is not None:
        store.save(run)
    return run


def site_from_jsonable(doc) -> SitePolygon:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise PipelineError("layout", "site must be {\"vertices\": [[x_mm, y_mm], ...]}")
    vertices = doc["vertices"]
    if (not isinstance(vertices, list)
            or any(not isinstance(v, list) or len(v) != 2 for v in vertices)):
        raise PipelineError("layout", "site vertices must be [x_mm, y_mm] pairs")
    try:
        return SitePolygon(vertices=tuple((float(x), float(y)) for x, y in vertices))
    except (TypeError, ValueError) as exc:
        raise PipelineError("layout", f"invalid site polygon: {exc}")


def program_stub_from_jsonable(doc: dict):
    """Rebuild the minimal program view (rooms only) that scheme generation
    needs, from a previously returned program payload."""
    rooms = []
    try:
        for dept in doc["departments"]:
            for room in dept["rooms"]:
                rooms.append(SimpleNamespace(
                    name=room["name"],
                    department=dept["name"],
                    quantity=int(room["quantity"]),
                    unit_area=float(room["unit_area"]),
                    priority=room["priority"],
                ))
    except (KeyError, TypeError, ValueError) as exc:
        raise PipelineError("program", f"malformed program payload: {exc}")
    if not rooms or any(r.quantity < 0 or not math.isfinite(r.unit_area) for r in rooms):
        raise PipelineError("program", "program payload has no usable rooms")
    return SimpleNamespace(rooms=rooms)


class RunStore:
    """Directory of JSON run documents; writes are temp-then-rename."""

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)

    def _path(self, run_id: str) -> str:
        if not run_id or "/" in run_id or run_id.startswith("."):
            raise KeyError(run_id)
        return os.path.join(self.root, f"{run_id}.json")

    def save(self, run: PipelineRun):
        payload = json.dumps(run.to_jsonable(), sort_keys=True, indent=2)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(run.run_id))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def load(self, run_id: str) -> PipelineRun:
        try:
            with open(self._path(run_id), "r") as fh:
                return PipelineRun.from_jsonable(json.load(fh))
        except FileNotFoundError:
            raise KeyError(run_id)

    def list_ids(self) -> list:
        return sorted(name[:-5] for name in os.listdir(self.root)
                      if name.endswith(".json"))
