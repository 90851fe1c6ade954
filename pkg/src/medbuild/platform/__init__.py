"""Composition layer: pipeline orchestration, run store, CLI, HTTP service."""

from .pipeline import (
    PipelineError,
    PipelineRun,
    RunStore,
    canonical_output_bytes,
    compute_outputs,
    input_hash,
    parse_stage,
    run_pipeline,
    site_from_jsonable,
)

__all__ = [
    "PipelineError",
    "PipelineRun",
    "RunStore",
    "canonical_output_bytes",
    "compute_outputs",
    "input_hash",
    "parse_stage",
    "run_pipeline",
    "site_from_jsonable",
]
