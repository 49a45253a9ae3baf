"""Command-line entry points.

The commands mirror the workflow: seed or extend a catalog (``demo``,
``ingest``), look things up (``query``), run the whole construction loop in
one shot (``generate``), exercise the streaming integer tuner on intensity
text files (``tune-fpga``), or serve the HTTP API (``serve``).
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .blend import TuneConfig
from .catalog import (
    Catalog,
    ComponentKind,
    Query,
    load_catalog,
    match_query,
    save_catalog,
    validate_params,
)
from .datapath import run_textfile_flow
from .errors import PhotofitError
from .fixtures import DEMO_DESCRIPTION, build_demo_catalog
from .image import binarize, load_pgm
from .session import ConstructionService

ROOT_OPTION = click.option(
    "--root",
    envvar="PHOTOFIT_CATALOG_ROOT",
    show_envvar=True,
    type=click.Path(path_type=Path),
    required=True,
    help="Catalog directory (manifest.tsv plus image files).",
)


def _load_catalog(root: Path) -> Catalog:
    try:
        return load_catalog(root)
    except PhotofitError as exc:
        raise click.ClickException(str(exc)) from None


def _parse_params(pairs: tuple[str, ...]) -> dict[str, str]:
    params = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise click.UsageError(f"--param needs Name=Value, got {pair!r}")
        params[name] = value
    return params


@click.group()
def main():
    """Compose faces from catalogued components."""


@main.command()
@ROOT_OPTION
def demo(root: Path):
    """Seed ROOT with the synthetic demo catalog and description."""
    catalog = build_demo_catalog()
    save_catalog(catalog, root)
    desc_path = root / "demo-description.json"
    desc_path.write_text(json.dumps(DEMO_DESCRIPTION, indent=2) + "\n")
    for kind in ComponentKind:
        click.echo(f"{kind.value}: {len(catalog.records(kind))} records")
    click.echo(f"wrote {desc_path}")


@main.command()
@ROOT_OPTION
@click.option("--kind", required=True, help="Component kind, e.g. Nose.")
@click.option("--image", "image_path", required=True, type=click.Path(path_type=Path, exists=True))
@click.option("--mask", "mask_path", type=click.Path(path_type=Path, exists=True))
@click.option("--param", "params", multiple=True, help="Name=Value, repeatable.")
@click.option("--source", default="", help="Free-form provenance note.")
@click.option("--id", "record_id", default=None, help="Explicit record id.")
def ingest(root, kind, image_path, mask_path, params, source, record_id):
    """Store one component image (PGM) in the catalog."""
    catalog = _load_catalog(root) if (root / "manifest.tsv").exists() else Catalog()
    try:
        parsed_kind = ComponentKind.parse(kind)
        parsed_params = _parse_params(params)
        image = load_pgm(image_path.read_bytes())
        mask = None
        if mask_path is not None:
            # Any nonzero pixel counts as background; 0 stays foreground.
            mask = binarize(load_pgm(mask_path.read_bytes()), 1)
        report = validate_params(parsed_kind, parsed_params)
        record = catalog.ingest(
            parsed_kind, parsed_params, image, mask, source=source, record_id=record_id
        )
        save_catalog(catalog, root)
    except (PhotofitError, ValueError) as exc:
        raise click.ClickException(str(exc)) from None
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(record.id)


@main.command()
@ROOT_OPTION
@click.option("--kind", required=True)
@click.option("--param", "params", multiple=True, help="Name=Value constraint, repeatable.")
def query(root, kind, params):
    """List catalog records matching the constraints, best first."""
    catalog = _load_catalog(root)
    try:
        q = Query(ComponentKind.parse(kind), _parse_params(params))
    except (PhotofitError, ValueError) as exc:
        raise click.ClickException(str(exc)) from None
    for record in match_query(q, catalog):
        rendered = " ".join(f"{n}={v}" for n, v in sorted(record.params.items()))
        click.echo(f"{record.id}\t{rendered}")


@main.command()
@ROOT_OPTION
@click.option(
    "--desc",
    "desc_path",
    type=click.Path(path_type=Path, exists=True),
    help="JSON description file; defaults to the built-in demo description.",
)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--stage", type=click.Choice(["blind", "masked", "tuned"]), default="tuned")
@click.option("--threshold", type=click.IntRange(0, 255), default=0, show_default=True)
@click.option(
    "--transcript",
    "transcript_path",
    type=click.Path(path_type=Path),
    help="Also write the session action log as JSON.",
)
def generate(root, desc_path, out_path, stage, threshold, transcript_path):
    """Run describe, auto-select, assemble and tune in one shot.

    Picks the first (best-ranked) candidate for every kind, so the result
    is deterministic for a given catalog and description.
    """
    catalog = _load_catalog(root)
    if desc_path is not None:
        description = json.loads(desc_path.read_text())
    else:
        description = DEMO_DESCRIPTION
    service = ConstructionService(catalog)
    try:
        sess = service.create_session()
        service.submit_description(sess.id, description)
        for kind_name, warnings in sess.warnings.items():
            for warning in warnings:
                click.echo(f"warning: {kind_name}: {warning}", err=True)
        empty = [k.value for k, ids in sess.candidates.items() if not ids]
        if empty:
            raise click.ClickException(f"no candidates for: {', '.join(empty)}")
        for kind, ids in sess.candidates.items():
            service.select_candidate(sess.id, kind, ids[0])
            click.echo(f"{kind.value}: {ids[0]} ({len(ids)} candidates)", err=True)
        service.assemble_session(sess.id)
        layout = sess.layout()
        for kind, p in layout.placements.items():
            click.echo(f"{kind.value}: {p.top_row},{p.left_col}", err=True)
        if stage == "tuned":
            service.tune_session(sess.id, threshold)
        data = service.export_face(sess.id, stage, "pgm")
    except PhotofitError as exc:
        raise click.ClickException(str(exc)) from None
    out_path.write_bytes(data)
    if transcript_path is not None:
        transcript_path.write_text(json.dumps(sess.transcript, indent=2) + "\n")
    click.echo(f"wrote {out_path} ({stage})")


@main.command("tune-fpga")
@click.option("--face", "face_path", required=True, type=click.Path(path_type=Path, exists=True))
@click.option(
    "--components", "comp_path", required=True, type=click.Path(path_type=Path, exists=True)
)
@click.option("--width", required=True, type=click.IntRange(min=1))
@click.option("--height", required=True, type=click.IntRange(min=1))
@click.option("--threshold", type=click.IntRange(0, 255), default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
@click.option("--trace", "trace_path", type=click.Path(path_type=Path))
def tune_fpga(face_path, comp_path, width, height, threshold, out_path, trace_path):
    """Streaming integer tuning over headerless intensity text files.

    Dimensions travel out of band, so --width/--height must match the
    files.  The optional trace lists every blended pixel with its
    intermediate terms, one row per pixel.
    """
    cfg = TuneConfig(component_threshold=threshold)
    try:
        tuned_text, trace = run_textfile_flow(
            face_path.read_text(), comp_path.read_text(), width, height, cfg
        )
    except PhotofitError as exc:
        raise click.ClickException(str(exc)) from None
    out_path.write_text(tuned_text)
    if trace_path is not None:
        trace_path.write_text(trace.to_tsv())
    click.echo(f"wrote {out_path} ({len(trace.records)} pixels blended)")


@main.command()
@click.option("--root", envvar="PHOTOFIT_CATALOG_ROOT", show_envvar=True, type=click.Path(path_type=Path))
@click.option("--demo", "use_demo", is_flag=True, help="Serve the built-in synthetic catalog.")
@click.option("--host", envvar="PHOTOFIT_HOST", show_envvar=True, default="127.0.0.1", show_default=True)
@click.option("--port", envvar="PHOTOFIT_PORT", show_envvar=True, type=int, default=8000, show_default=True)
def serve(root, use_demo, host, port):
    """Run the HTTP API."""
    import uvicorn

    from .webapp import create_app

    if use_demo:
        catalog = build_demo_catalog()
    elif root is not None:
        catalog = _load_catalog(root)
    else:
        raise click.UsageError("pass --root or --demo")
    uvicorn.run(create_app(catalog), host=host, port=port)


if __name__ == "__main__":
    main()
