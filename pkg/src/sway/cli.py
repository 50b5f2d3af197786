"""Command-line interface: session creation, prompting, coordination,
export, validation, and serving the HTTP API."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .coordination import scheme_from_json
from .session import SessionStore
from .svg_model import EncodingManifest


def _store() -> SessionStore:
    data_dir = os.environ.get("SWAY_DATA_DIR", "./sway-data")
    return SessionStore(data_dir)


@click.group()
def main():
    """Authoring engine for animated SVG data visualizations."""


@main.command()
@click.argument("svg", type=click.Path(exists=True, path_type=Path))
@click.option("--styles", type=click.Path(exists=True, path_type=Path))
@click.option("--manifest", type=click.Path(exists=True, path_type=Path))
def new(svg, styles, manifest):
    """Create a session from an SVG file."""
    manifest_obj = None
    if manifest:
        manifest_obj = EncodingManifest.from_json(json.loads(manifest.read_text()))
    styles_text = styles.read_text() if styles else None
    session = _store().create_session(svg.read_text(), styles_text, manifest_obj)
    click.echo(session.id)


@main.command()
@click.argument("session_id")
@click.argument("text")
@click.option("--base", "bases", multiple=True, type=int,
              help="Base version id(s) to iterate on.")
def prompt(session_id, text, bases):
    """Send a message; prints the reply and any new version id."""
    entry, version = _store().post_message(session_id, text, list(bases))
    click.echo(entry.text)
    if version:
        click.echo(f"version {version.id} created with {len(version.clips)} clip(s)")
        for w in version.warnings:
            click.echo(f"warning: {w.rationale}")


@main.command()
@click.argument("session_id")
@click.argument("version_id", type=int)
@click.argument("track", type=int)
@click.option("--mode", required=True,
              type=click.Choice(["data", "layout-radius", "layout-projection",
                                 "layout-sketch", "layer", "random"]))
@click.option("--direction", type=click.Choice(["ascending", "descending"]),
              default="ascending")
@click.option("--basis", type=click.Choice(["rank", "value"]), default="rank")
@click.option("--attribute", default=None)
@click.option("--center", nargs=2, type=float, help="viewBox-relative center")
@click.option("--start", nargs=2, type=float)
@click.option("--end", nargs=2, type=float)
@click.option("--polyline", default=None,
              help="JSON list of viewBox-relative [x,y] points")
@click.option("--seed", type=int, default=0)
def coord(session_id, version_id, track, mode, direction, basis, attribute,
          center, start, end, polyline, seed):
    """Set a track's coordination scheme."""
    data = {"mode": mode}
    if mode == "data":
        data.update(direction=direction, basis=basis)
        if attribute:
            data["attribute"] = attribute
    elif mode == "layout-radius":
        data["center"] = list(center or (0.5, 0.5))
    elif mode == "layout-projection":
        data["start"] = list(start or (0.0, 0.5))
        data["end"] = list(end or (1.0, 0.5))
    elif mode == "layout-sketch":
        data["polyline"] = json.loads(polyline or "[]")
    elif mode == "layer":
        data["direction"] = direction
    elif mode == "random":
        data["seed"] = seed
    scheme = scheme_from_json(data)
    _store().set_coordination(session_id, version_id, track, scheme)
    click.echo(f"track {track} coordination set to {mode}")


@main.command()
@click.argument("session_id")
@click.argument("version_id", type=int)
@click.argument("track", type=int)
@click.option("--delay", type=float, required=True)
@click.option("--duration", type=float, required=True)
def timing(session_id, version_id, track, delay, duration):
    """Set a track's global delay and duration (milliseconds)."""
    _store().set_timeline(session_id, version_id, track, delay, duration)
    click.echo(f"track {track} timing set to delay={delay} duration={duration}")


@main.command()
@click.argument("session_id")
@click.argument("version_id", type=int)
@click.option("--flavor", type=click.Choice(["program", "script", "baked"]),
              default="program")
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def export(session_id, version_id, flavor, output):
    """Export a version as a program, runtime script, or baked SVG+CSS."""
    artifact = _store().export(session_id, version_id, flavor)
    output.write_bytes(artifact)
    click.echo(f"wrote {output} ({len(artifact)} bytes)")


@main.command()
@click.argument("session_id")
@click.argument("version_id", type=int)
def check(session_id, version_id):
    """Run the validator and structural checks on a version."""
    diagnostics, warnings = _store().check(session_id, version_id)
    for d in diagnostics:
        click.echo(f"diagnostic: {d}")
    for w in warnings:
        click.echo(f"warning [{w.channel}]: {w.rationale}")
    if not diagnostics and not warnings:
        click.echo("clean")
    if diagnostics:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8008)
def serve(host, port):
    """Serve the HTTP API (and the studio UI assets, when built)."""
    import uvicorn

    from .api import create_app

    app = create_app(_store())
    frontend_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if frontend_dist.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dist, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
