"""Command-line front end for the planning pipeline.

Exit codes: 0 success, 2 validation failure, 3 config error.  The config
file comes from --config or the MEDBUILD_CONFIG environment variable,
falling back to the packaged defaults.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from decimal import Decimal

import click

from medbuild.dql import DqlError, parse_dql, serialize_dql, validate
from medbuild.layout import SiteTooSmall
from medbuild.program import (
    ConfigError,
    generate_program,
    load_config,
    load_default_config,
    program_to_jsonable,
)
from .pipeline import (
    PipelineError,
    RunStore,
    canonical_output_bytes,
    run_pipeline,
    site_from_jsonable,
)

EXIT_VALIDATION = 2
EXIT_CONFIG = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_cfg(path):
    path = path or os.environ.get("MEDBUILD_CONFIG")
    try:
        return load_config(path) if path else load_default_config()
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_CONFIG, f"config: {exc}")


def _read_text(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    try:
        with open(src, "r") as fh:
            return fh.read()
    except OSError as exc:
        _fail(EXIT_VALIDATION, str(exc))


def _load_site(path: str):
    try:
        with open(path, "r") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_VALIDATION, f"site file: {exc}")
    try:
        return site_from_jsonable(doc)
    except PipelineError as exc:
        _fail(EXIT_VALIDATION, str(exc))


def _jsonable(value):
    if isinstance(value, Decimal):
        return float(value)
    if dataclasses.is_dataclass(value):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(value).items()}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


_config_option = click.option(
    "--config", "config_path", default=None, envvar="MEDBUILD_CONFIG",
    help="Planning config JSON (default: packaged config).")


@click.group()
def main():
    """Healthcare facility pre-design pipeline."""


@main.command()
@click.argument("source")
def parse(source):
    """Parse a DQL file ('-' for stdin) and pretty-print the record."""
    text = _read_text(source)
    try:
        record = parse_dql(text)
    except DqlError as exc:
        _fail(EXIT_VALIDATION, f"parse: {exc}")
    violations = validate(record)
    doc = {
        "record": {f.name: _jsonable(getattr(record, f.name))
                   for f in dataclasses.fields(record)
                   if getattr(record, f.name) is not None},
        "canonical": serialize_dql(record),
        "violations": [dataclasses.asdict(v) for v in violations],
    }
    click.echo(json.dumps(doc, indent=2, sort_keys=True))
    if any(v.severity == "hard" for v in violations):
        sys.exit(EXIT_VALIDATION)


def _program_table(doc: dict) -> str:
    lines = []
    beds = doc["beds"]
    totals = doc["totals"]
    cost = doc["cost"]
    lines.append(f"Level: {doc['level']}  (score {doc['score']:.4f}"
                 + (", primary extension" if doc["primary_extension"] else "")
                 + ")")
    lines.append(f"Beds: {beds['target_total']}  "
                 f"(projected pop {beds['projected_population']:.0f}, "
                 f"base {beds['net_base']:.1f})")
    for name, value in beds["additions"]:
        lines.append(f"  addition {name}: {value:+.2f}")
    lines.append(f"Rooms: {totals['rooms']}   "
                 f"Net: {totals['net_area']:.1f} m2   "
                 f"Gross: {totals['gross_area']:.1f} m2")
    lines.append(f"Cost: {cost['estimated']:,.0f} of {cost['budget']:,.0f} "
                 + ("(feasible)" if cost["feasible"] else "(over budget)"))
    lines.append("")
    lines.append(f"{'Department':<28}{'Room':<32}{'Qty':>4}{'Unit m2':>9}{'Priority':>10}")
    lines.append("-" * 83)
    for dept in doc["departments"]:
        for i, room in enumerate(dept["rooms"]):
            dept_cell = dept["name"] if i == 0 else ""
            lines.append(f"{dept_cell:<28}{room['name']:<32}{room['quantity']:>4}"
                         f"{room['unit_area']:>9.1f}{room['priority']:>10}")
    lines.append("")
    lines.append("Trim ledger:")
    if not doc["trim_log"]:
        lines.append("  (no trims; program fits the budget as compiled)")
    for action in doc["trim_log"]:
        lines.append(f"  {action['target']}: "
                     f"{action['kind']} {action['before']} -> {action['after']} "
                     f"(saves {action['saved']:,.0f})")
    return "\n".join(lines)


@main.command()
@click.argument("source")
@_config_option
@click.option("--json", "as_json", is_flag=True, help="Emit JSON (default).")
@click.option("--table", "as_table", is_flag=True, help="Emit a readable table.")
def program(source, config_path, as_json, as_table):
    """Compile a DQL file into a budget-compliant functional program."""
    cfg = _load_cfg(config_path)
    text = _read_text(source)
    try:
        record = parse_dql(text)
        hard = [v for v in validate(record) if v.severity == "hard"]
        if hard:
            _fail(EXIT_VALIDATION, "; ".join(v.message for v in hard))
        prog = generate_program(record, cfg)
    except DqlError as exc:
        _fail(EXIT_VALIDATION, f"parse: {exc}")
    doc = program_to_jsonable(prog, cfg)
    if as_table:
        click.echo(_program_table(doc))
    else:
        click.echo(json.dumps({"config_hash": cfg.hash, "program": doc},
                              indent=2, sort_keys=True))


def _pipeline_outputs(source, site_path, seed, config_path):
    cfg = _load_cfg(config_path)
    site = _load_site(site_path)
    text = _read_text(source)
    try:
        return run_pipeline(text, site, seed, cfg), cfg
    except (PipelineError, SiteTooSmall) as exc:
        _fail(EXIT_VALIDATION, str(exc))


@main.command()
@click.argument("source")
@click.option("--site", "site_path", required=True,
              help='Site polygon JSON: {"vertices": [[x_mm, y_mm], ...]}.')
@click.option("--seed", type=int, default=0, show_default=True)
@_config_option
def schemes(source, site_path, seed, config_path):
    """Generate the two axis schemes for a DQL file and site."""
    run, cfg = _pipeline_outputs(source, site_path, seed, config_path)
    doc = dict(run.outputs["schemes"])
    doc["config_hash"] = cfg.hash
    doc["typologies"] = run.outputs["typologies"]
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


@main.command()
@click.argument("source")
@click.option("--site", "site_path", required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", required=True, help="Output directory.")
@click.option("--format", "fmt", type=click.Choice(["scene-json", "obj"]),
              default="scene-json", show_default=True)
@_config_option
def scene(source, site_path, seed, out_dir, fmt, config_path):
    """Synthesize massing scenes and write one file per scheme."""
    from medbuild.massing import export_scene, scene_from_jsonable

    run, _ = _pipeline_outputs(source, site_path, seed, config_path)
    os.makedirs(out_dir, exist_ok=True)
    ext = "json" if fmt == "scene-json" else "obj"
    for scheme_id, scene_doc in sorted(run.outputs["scenes"].items()):
        payload = export_scene(scene_from_jsonable(scene_doc), fmt)
        path = os.path.join(out_dir, f"{scheme_id}.{ext}")
        with open(path, "wb") as fh:
            fh.write(payload)
        click.echo(f"wrote {path}")


@main.command()
@click.argument("source")
@click.option("--site", "site_path", required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--runs-dir", default=None, help="Persist the run here.")
@_config_option
def pipeline(source, site_path, seed, runs_dir, config_path):
    """Run the full pipeline and print the canonical output document."""
    cfg = _load_cfg(config_path)
    site = _load_site(site_path)
    text = _read_text(source)
    store = RunStore(runs_dir) if runs_dir else None
    try:
        run = run_pipeline(text, site, seed, cfg, store)
    except (PipelineError, SiteTooSmall) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    if store is not None:
        click.echo(f"run {run.run_id}", err=True)
    sys.stdout.buffer.write(canonical_output_bytes(run.outputs))


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--runs-dir", default="runs", show_default=True)
@_config_option
def serve(port, host, runs_dir, config_path):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    cfg = _load_cfg(config_path)
    app = create_app(cfg, runs_dir)
    click.echo(f"config {cfg.hash}; runs in {runs_dir}", err=True)
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.option("--fixtures", "fixtures_path", required=True,
              help="JSON list of {name, dql, level, beds, area}.")
@click.option("--area-tolerance", type=float, default=0.05, show_default=True,
              help="Relative net-area tolerance.")
@_config_option
def calibrate(fixtures_path, area_tolerance, config_path):
    """Check the active config against published scenario expectations."""
    cfg = _load_cfg(config_path)
    try:
        with open(fixtures_path, "r") as fh:
            fixtures = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_VALIDATION, f"fixtures file: {exc}")
    failures = 0
    click.echo(f"config {cfg.hash}")
    for fx in fixtures:
        try:
            prog = generate_program(parse_dql(fx["dql"]), cfg)
        except DqlError as exc:
            _fail(EXIT_VALIDATION, f"{fx.get('name', '?')}: {exc}")
        net = prog.net_area()
        area_delta = (net - fx["area"]) / fx["area"]
        ok = (prog.level == fx["level"]
              and prog.beds.target_total == fx["beds"]
              and abs(area_delta) <= area_tolerance)
        failures += 0 if ok else 1
        click.echo(
            f"{'ok  ' if ok else 'FAIL'} {fx['name']:<18}"
            f" level {prog.level:<9} (want {fx['level']:<9})"
            f" beds {prog.beds.target_total:>5} (want {fx['beds']:>5})"
            f" area {net:>9.1f} (want {fx['area']:>7}, delta {area_delta:+.2%})")
    if failures:
        _fail(EXIT_VALIDATION, f"{failures} fixture(s) out of calibration")


if __name__ == "__main__":
    main()
