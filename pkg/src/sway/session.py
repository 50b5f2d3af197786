"""Session management and persistence: one directory per session holding the
reference SVG, the transcript, and every generated version."""

from __future__ import annotations

import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import assistant
from .canonical import canonical_dumps
from .clips import GroupClip, Version, Warning, clip_from_json, clip_to_json
from .composition import Timeline, compute_assignments, sample
from .coordination import scheme_from_json, scheme_to_json
from .errors import (
    BusySession,
    InvalidDuration,
    UnknownSession,
    UnknownTrack,
    UnknownVersion,
)
from .exporter import bake_css, emit_runtime_script, export_program
from .svg_model import EncodingManifest, VectorDocument, parse_document


@dataclass
class HistoryEntry:
    role: str  # user | assistant
    text: str
    referred_versions: list = field(default_factory=list)
    produced_version: int | None = None
    timestamp: float = 0.0

    def to_json(self) -> dict:
        return {
            "role": self.role,
            "text": self.text,
            "referred_versions": list(self.referred_versions),
            "produced_version": self.produced_version,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(data: dict) -> "HistoryEntry":
        return HistoryEntry(
            role=data["role"],
            text=data["text"],
            referred_versions=list(data.get("referred_versions", [])),
            produced_version=data.get("produced_version"),
            timestamp=data.get("timestamp", 0.0),
        )


@dataclass
class Session:
    id: str
    document: VectorDocument
    styles: str | None = None
    manifest: EncodingManifest | None = None
    history: list = field(default_factory=list)
    versions: list = field(default_factory=list)
    active_version: int | None = None

    def version(self, version_id: int) -> Version:
        for v in self.versions:
            if v.id == version_id:
                return v
        raise UnknownVersion(f"version {version_id} not in session {self.id}")


def group_clip_to_json(gc: GroupClip) -> dict:
    return {
        "clip": clip_to_json(gc.clip),
        "delay": gc.delay_ms,
        "duration": gc.duration_ms,
        "offset": gc.offset_ms,
        "coordination": scheme_to_json(gc.coordination),
    }


def group_clip_from_json(data: dict) -> GroupClip:
    return GroupClip(
        clip=clip_from_json(data["clip"]),
        delay_ms=data["delay"],
        duration_ms=data["duration"],
        offset_ms=data["offset"],
        coordination=scheme_from_json(data["coordination"]),
    )


def version_to_json(v: Version) -> dict:
    return {
        "id": v.id,
        "clips": [group_clip_to_json(gc) for gc in v.clips],
        "origin_message": v.origin_message,
        "base_versions": list(v.base_versions),
        "warnings": [w.to_json() for w in v.warnings],
    }


def version_from_json(data: dict) -> Version:
    return Version(
        id=data["id"],
        clips=[group_clip_from_json(g) for g in data["clips"]],
        origin_message=data.get("origin_message"),
        base_versions=list(data.get("base_versions", [])),
        warnings=[Warning(**w) for w in data.get("warnings", [])],
    )


def version_timeline(version: Version) -> Timeline:
    return Timeline(tracks=tuple(version.clips), version_id=version.id)


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


class SessionStore:
    """Filesystem-backed store; sessions are independent, writes per session
    are serialized by a lock (also guards the one-generation-in-flight rule)."""

    def __init__(self, data_dir, client=None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.client = client or assistant.default_client()
        self._locks: dict = {}
        self._locks_guard = threading.Lock()
        self._cache: dict = {}

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    # -- persistence --

    def _dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def save(self, session: Session) -> None:
        d = self._dir(session.id)
        (d / "versions").mkdir(parents=True, exist_ok=True)
        _atomic_write(d / "source.svg", session.document.source_text)
        if session.styles is not None:
            _atomic_write(d / "styles.css", session.styles)
        meta = {
            "id": session.id,
            "manifest": session.manifest.to_json() if session.manifest else None,
            "history": [h.to_json() for h in session.history],
            "active_version": session.active_version,
            "version_ids": [v.id for v in session.versions],
        }
        for v in session.versions:
            _atomic_write(d / "versions" / f"{v.id}.json",
                          canonical_dumps(version_to_json(v)))
        _atomic_write(d / "session.json", canonical_dumps(meta))
        self._cache[session.id] = session

    def load(self, session_id: str) -> Session:
        cached = self._cache.get(session_id)
        if cached is not None:
            return cached
        d = self._dir(session_id)
        meta_path = d / "session.json"
        if not meta_path.exists():
            raise UnknownSession(session_id)
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        doc = parse_document((d / "source.svg").read_text(encoding="utf-8"))
        styles = None
        if (d / "styles.css").exists():
            styles = (d / "styles.css").read_text(encoding="utf-8")
        manifest = (EncodingManifest.from_json(meta["manifest"])
                    if meta.get("manifest") else None)
        versions = [
            version_from_json(json.loads(
                (d / "versions" / f"{vid}.json").read_text(encoding="utf-8")))
            for vid in meta.get("version_ids", [])
        ]
        session = Session(
            id=meta["id"],
            document=doc,
            styles=styles,
            manifest=manifest,
            history=[HistoryEntry.from_json(h) for h in meta.get("history", [])],
            versions=versions,
            active_version=meta.get("active_version"),
        )
        self._cache[session_id] = session
        return session

    def list_sessions(self) -> list:
        return sorted(p.name for p in self.data_dir.iterdir()
                      if (p / "session.json").exists())

    # -- operations --

    def create_session(self, svg, styles: str | None = None,
                       manifest: EncodingManifest | None = None) -> Session:
        doc = parse_document(svg)
        session = Session(
            id=secrets.token_hex(16),
            document=doc,
            styles=styles,
            manifest=manifest,
        )
        self.save(session)
        return session

    def post_message(self, session_id: str, text: str, base_version_ids=()):
        """One conversational round; history and any produced version are
        persisted together (both or neither)."""
        lock = self._lock(session_id)
        if not lock.acquire(blocking=False):
            raise BusySession(f"generation already in flight for {session_id}")
        try:
            session = self.load(session_id)
            by_id = {v.id for v in session.versions}
            for vid in base_version_ids:
                if vid not in by_id:
                    raise UnknownVersion(f"base version {vid} does not exist")
            reply, version = assistant.generate_version(
                session, self.client, text, base_version_ids)
            now = time.time()
            user_entry = HistoryEntry(
                role="user", text=text,
                referred_versions=list(base_version_ids), timestamp=now,
            )
            assistant_entry = HistoryEntry(
                role="assistant", text=reply.message,
                produced_version=version.id if version else None, timestamp=now,
            )
            session.history.append(user_entry)
            session.history.append(assistant_entry)
            if version:
                version.origin_message = len(session.history) - 1
                session.active_version = version.id
            self.save(session)
            return assistant_entry, version
        except Exception:
            self._cache.pop(session_id, None)  # discard partial in-memory state
            raise
        finally:
            lock.release()

    def set_coordination(self, session_id: str, version_id: int,
                         track_ordinal: int, scheme) -> Version:
        with self._lock(session_id):
            session = self.load(session_id)
            version = session.version(version_id)
            if not 0 <= track_ordinal < len(version.clips):
                raise UnknownTrack(f"track {track_ordinal} of {len(version.clips)}")
            scheme.validate()
            gc = version.clips[track_ordinal]
            version.clips[track_ordinal] = GroupClip(
                clip=gc.clip, delay_ms=gc.delay_ms, duration_ms=gc.duration_ms,
                offset_ms=gc.offset_ms, coordination=scheme,
            )
            self.save(session)
            return version

    def set_timeline(self, session_id: str, version_id: int, track_ordinal: int,
                     delay_ms: float, duration_ms: float) -> Version:
        with self._lock(session_id):
            session = self.load(session_id)
            version = session.version(version_id)
            if not 0 <= track_ordinal < len(version.clips):
                raise UnknownTrack(f"track {track_ordinal} of {len(version.clips)}")
            if duration_ms <= 0:
                raise InvalidDuration(f"duration must be > 0, got {duration_ms}")
            if delay_ms < 0:
                raise InvalidDuration(f"delay must be >= 0, got {delay_ms}")
            version.clips[track_ordinal] = version.clips[track_ordinal].with_timing(
                delay_ms, duration_ms)
            self.save(session)
            return version

    def set_offset(self, session_id: str, version_id: int, track_ordinal: int,
                   offset_ms: float) -> Version:
        with self._lock(session_id):
            session = self.load(session_id)
            version = session.version(version_id)
            if not 0 <= track_ordinal < len(version.clips):
                raise UnknownTrack(f"track {track_ordinal} of {len(version.clips)}")
            if offset_ms < 0:
                raise InvalidDuration(f"offset must be >= 0, got {offset_ms}")
            gc = version.clips[track_ordinal]
            version.clips[track_ordinal] = GroupClip(
                clip=gc.clip, delay_ms=gc.delay_ms, duration_ms=gc.duration_ms,
                offset_ms=offset_ms, coordination=gc.coordination,
            )
            self.save(session)
            return version

    def preview(self, session_id: str, version_id: int, t: float):
        session = self.load(session_id)
        version = session.version(version_id)
        timeline = version_timeline(version)
        assignments = compute_assignments(session.document, timeline)
        return sample(session.document, timeline, assignments, t)

    def export(self, session_id: str, version_id: int, flavor: str) -> bytes:
        session = self.load(session_id)
        version = session.version(version_id)
        timeline = version_timeline(version)
        program = export_program(session.document, timeline,
                                 session_id=session_id, version_id=version_id)
        if flavor == "program":
            return program.serialize().encode("utf-8")
        if flavor == "script":
            return emit_runtime_script(program).encode("utf-8")
        if flavor == "baked":
            assignments = compute_assignments(session.document, timeline)
            svg_text, css_text = bake_css(session.document, timeline, assignments)
            return canonical_dumps({"svg": svg_text, "css": css_text}).encode("utf-8")
        raise ValueError(f"unknown export flavor {flavor!r}")

    def check(self, session_id: str, version_id: int):
        """Validator + structural diagnostics for one version."""
        from .clips import validate_clip

        session = self.load(session_id)
        version = session.version(version_id)
        diagnostics = []
        for ordinal, gc in enumerate(version.clips):
            for d in validate_clip(gc.clip, session.document):
                diagnostics.append(f"track {ordinal}: {d}")
        warnings = assistant.check_encoding_conflict(
            session.manifest, [gc.clip for gc in version.clips])
        return diagnostics, warnings
