"""HTTP/JSON API over the session store (the surface the UI consumes)."""

from __future__ import annotations

import json

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from .canonical import canonical_dumps
from .coordination import scheme_from_json
from .errors import (
    BudgetTooSmall,
    BusySession,
    ClientError,
    EmptyGroup,
    EmptyTimeline,
    InvalidDuration,
    InvalidScheme,
    MalformedSvg,
    MissingViewBox,
    SchemaViolation,
    SwayError,
    UnbakeableFeature,
    UnknownSession,
    UnknownTrack,
    UnknownVersion,
    UnsupportedVersion,
)
from .session import SessionStore, version_to_json
from .svg_model import EncodingManifest

_STATUS = {
    UnknownSession: 404,
    UnknownVersion: 404,
    UnknownTrack: 404,
    BusySession: 409,
    ClientError: 502,
    UnbakeableFeature: 422,
    MalformedSvg: 400,
    MissingViewBox: 400,
    InvalidScheme: 400,
    InvalidDuration: 400,
    SchemaViolation: 400,
    EmptyGroup: 400,
    EmptyTimeline: 400,
    BudgetTooSmall: 413,
    UnsupportedVersion: 400,
}


def _canonical_json(data, status_code: int = 200) -> Response:
    return Response(content=canonical_dumps(data), status_code=status_code,
                    media_type="application/json")


def create_app(store: SessionStore) -> FastAPI:
    app = FastAPI(title="sway engine")

    @app.exception_handler(SwayError)
    async def _sway_error(request: Request, exc: SwayError):
        status = _STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc),
                     "detail": getattr(exc, "path", None)},
        )

    @app.post("/sessions")
    async def create_session(svg: UploadFile = File(...),
                             styles: UploadFile | None = File(None),
                             manifest: UploadFile | None = File(None)):
        svg_text = (await svg.read()).decode("utf-8")
        styles_text = (await styles.read()).decode("utf-8") if styles else None
        manifest_obj = None
        if manifest:
            manifest_obj = EncodingManifest.from_json(
                json.loads((await manifest.read()).decode("utf-8")))
        session = store.create_session(svg_text, styles_text, manifest_obj)
        return _canonical_json({"session_id": session.id})

    @app.post("/sessions/{session_id}/messages")
    async def post_message(session_id: str, body: dict):
        entry, version = store.post_message(
            session_id, body.get("text", ""), body.get("base_versions", []))
        return _canonical_json({
            "entry": entry.to_json(),
            "version": version_to_json(version) if version else None,
        })

    @app.get("/sessions/{session_id}/versions")
    async def list_versions(session_id: str):
        session = store.load(session_id)
        return _canonical_json({
            "versions": [version_to_json(v) for v in session.versions],
            "active_version": session.active_version,
        })

    @app.get("/sessions/{session_id}/versions/{version_id}")
    async def get_version(session_id: str, version_id: int):
        session = store.load(session_id)
        return _canonical_json(version_to_json(session.version(version_id)))

    @app.put("/sessions/{session_id}/versions/{version_id}/tracks/{track}/coordination")
    async def put_coordination(session_id: str, version_id: int, track: int,
                               body: dict):
        scheme = scheme_from_json(body.get("scheme", body))
        version = store.set_coordination(session_id, version_id, track, scheme)
        return _canonical_json(version_to_json(version))

    @app.put("/sessions/{session_id}/versions/{version_id}/tracks/{track}/timing")
    async def put_timing(session_id: str, version_id: int, track: int, body: dict):
        version = store.set_timeline(
            session_id, version_id, track, body["delay"], body["duration"])
        if "offset" in body:
            version = store.set_offset(session_id, version_id, track, body["offset"])
        return _canonical_json(version_to_json(version))

    @app.get("/sessions/{session_id}/versions/{version_id}/preview")
    async def preview(session_id: str, version_id: int, t: float = 0.0):
        snapshot = store.preview(session_id, version_id, t)
        return _canonical_json(snapshot.to_json())

    @app.post("/sessions/{session_id}/versions/{version_id}/export")
    async def export(session_id: str, version_id: int, body: dict):
        flavor = body.get("flavor", "program")
        artifact = store.export(session_id, version_id, flavor)
        media = {
            "program": "application/json",
            "script": "text/javascript",
            "baked": "application/json",
        }.get(flavor, "application/octet-stream")
        return Response(content=artifact, media_type=media)

    @app.get("/sessions/{session_id}/document")
    async def get_document(session_id: str):
        session = store.load(session_id)
        return Response(content=session.document.source_text,
                        media_type="image/svg+xml")

    @app.get("/sessions/{session_id}/versions/{version_id}/duration")
    async def duration(session_id: str, version_id: int):
        from .composition import compute_assignments, total_duration
        from .session import version_timeline

        session = store.load(session_id)
        version = session.version(version_id)
        timeline = version_timeline(version)
        assignments = compute_assignments(session.document, timeline)
        return _canonical_json({"total_duration": total_duration(timeline, assignments)})

    return app
