"""Prompt construction, structured-output parsing, and the encoding-conflict
validator. The model vendor sits behind a small client contract; an offline
stub replays canned fixtures."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .canonical import canonical_dumps
from .clips import (
    ClipSpec,
    GroupClip,
    Version,
    Warning,
    clip_from_json,
    clip_to_json,
    validate_clip,
)
from .coordination import LayerCentric
from .errors import ClientError
from .svg_model import EncodingManifest, condense_for_prompt, estimate_tokens

DEFAULT_CONTEXT_BUDGET = 16384

SYSTEM_TEXT = (
    "You are an animation design assistant for SVG data visualizations. "
    "Given the SVG, its screenshot, and the conversation, reply with a JSON "
    'object {"message": string, "clips": [...]} where each clip follows the '
    "given schema: a CSS-class selector, a title, a description, and keyframe "
    "tracks over the supported properties. Reply with message only when the "
    "user is asking a question rather than requesting animation."
)

ONE_SHOT_EXAMPLE = {
    "message": "A gentle sway for the leaves, rotating each around its center.",
    "clips": [
        {
            "selector": ".leaf",
            "title": "Gentle sway",
            "description": "Leaves rock back and forth around their centers.",
            "loop": True,
            "tracks": [
                {
                    "property": "rotate",
                    "keyframes": [
                        {"offset": 0, "value": -4, "easing": "sine-in-out"},
                        {"offset": 0.5, "value": 4, "easing": "sine-in-out"},
                        {"offset": 1, "value": -4},
                    ],
                }
            ],
        }
    ],
}

# animated property -> encoding channels it can distort
CONFLICT_TABLE = {
    "fill-color": ("fill-color", "stroke-color"),
    "stroke-color": ("fill-color", "stroke-color"),
    "scale": ("size",),
    "translateX": ("x-position",),
    "translateY": ("y-position",),
    "opacity": ("opacity",),
    "rotate": (),
    "stroke-width": (),
    "filter-blur": (),
}


@dataclass
class PromptBundle:
    system_text: str
    history: list  # (role, text) pairs
    user_text: str
    svg_text: str
    screenshot: bytes | None = None
    referenced_specs: list = field(default_factory=list)  # clip-schema JSON strings
    output_schema: str = ""
    one_shot_example: str = ""
    condense_notes: list = field(default_factory=list)

    def estimated_tokens(self) -> int:
        parts = [self.system_text, self.user_text, self.svg_text,
                 self.output_schema, self.one_shot_example]
        parts += [t for _, t in self.history]
        parts += list(self.referenced_specs)
        return sum(estimate_tokens(p) for p in parts)


OUTPUT_SCHEMA_TEXT = canonical_dumps({
    "type": "object",
    "properties": {
        "message": {"type": "string"},
        "clips": {"type": "array", "items": {"$ref": "#/definitions/clip"}},
    },
    "required": ["message"],
})


def build_prompt(session, user_text: str, base_version_ids=(),
                 budget: int = DEFAULT_CONTEXT_BUDGET) -> PromptBundle:
    """Assemble the full prompt: history, (possibly condensed) SVG, screenshot,
    one-shot example, and any referenced version specs."""
    history = [(h.role, h.text) for h in session.history]
    referenced = []
    by_id = {v.id: v for v in session.versions}
    for vid in base_version_ids:
        version = by_id[vid]
        referenced.append(canonical_dumps(
            {"version": vid,
             "clips": [clip_to_json(gc.clip) for gc in version.clips]}
        ))
    example = canonical_dumps(ONE_SHOT_EXAMPLE)

    fixed_cost = sum(estimate_tokens(p) for p in
                     [SYSTEM_TEXT, user_text, OUTPUT_SCHEMA_TEXT, example,
                      *[t for _, t in history], *referenced])
    svg_budget = budget - fixed_cost
    doc = session.document
    notes = []
    if estimate_tokens(doc.source_text) <= svg_budget:
        svg_text = doc.source_text
    else:
        svg_text, report = condense_for_prompt(doc, max(svg_budget, 1))
        notes = report.notes()
    return PromptBundle(
        system_text=SYSTEM_TEXT,
        history=history,
        user_text=user_text,
        svg_text=svg_text,
        screenshot=getattr(session, "screenshot", None),
        referenced_specs=referenced,
        output_schema=OUTPUT_SCHEMA_TEXT,
        one_shot_example=example,
        condense_notes=notes,
    )


@dataclass
class AssistantReply:
    message: str
    clips: list | None
    raw: str
    diagnostics: list = field(default_factory=list)


def _first_json_object(text: str):
    decoder = json.JSONDecoder()
    pos = text.find("{")
    while pos != -1:
        try:
            obj, _ = decoder.raw_decode(text, pos)
        except ValueError:
            pos = text.find("{", pos + 1)
            continue
        if isinstance(obj, dict) and "message" in obj:
            return obj
        pos = text.find("{", pos + 1)
    return None


def parse_reply(raw_text: str) -> AssistantReply:
    """Extract the structured reply from model output.

    Clips failing structural validation are dropped with diagnostics; a reply
    with no parseable JSON becomes message-only carrying the raw text.
    """
    obj = _first_json_object(raw_text)
    if obj is None:
        return AssistantReply(
            message=raw_text.strip(),
            clips=None,
            raw=raw_text,
            diagnostics=["NoJsonFound"],
        )
    message = str(obj.get("message", ""))
    clips_data = obj.get("clips")
    if not clips_data:
        return AssistantReply(message=message, clips=None, raw=raw_text)
    clips = []
    diagnostics = []
    for i, data in enumerate(clips_data):
        try:
            clip = clip_from_json(data)
        except (TypeError, ValueError, KeyError) as exc:
            diagnostics.append(f"clip[{i}]: unparseable ({exc})")
            continue
        issues = validate_clip(clip)
        if issues:
            diagnostics.extend(f"clip[{i}] {d}" for d in issues)
            continue
        clips.append(clip)
    return AssistantReply(
        message=message,
        clips=clips or None,
        raw=raw_text,
        diagnostics=diagnostics,
    )


def check_encoding_conflict(manifest: EncodingManifest | None, clips) -> list:
    """Deterministic rule-table check of animated properties against declared
    encodings. One advisory warning per (clip, conflicting manifest entry)."""
    if manifest is None:
        return []
    warnings = []
    for clip in clips:
        animated = [t.property for t in clip.tracks]
        clip_sel = clip.selector.lstrip(".")
        for entry in manifest.entries:
            if entry.selector.lstrip(".") != clip_sel:
                continue
            hits = [p for p in animated if entry.channel in CONFLICT_TABLE.get(p, ())]
            if hits:
                warnings.append(Warning(
                    channel=entry.channel,
                    selector=clip.selector,
                    rationale=(
                        f"{entry.channel} has already encoded "
                        f"{entry.meaning or 'data'} on {clip.selector}; animating "
                        f"{', '.join(hits)} may confuse the audience."
                    ),
                ))
    return warnings


# --- model clients ----------------------------------------------------------


class ModelClient:
    """Contract: complete(bundle) -> raw text. Implementations are swappable."""

    max_context_tokens: int = DEFAULT_CONTEXT_BUDGET

    def complete(self, bundle: PromptBundle) -> str:
        raise NotImplementedError


def stub_key(user_text: str) -> str:
    return hashlib.sha256(user_text.strip().encode("utf-8")).hexdigest()[:16]


_DEFAULT_FIXTURES = Path(__file__).parent / "fixtures" / "stub"


class StubClient(ModelClient):
    """Offline client replaying canned replies from a fixtures directory
    (one <request-hash>.json file per known prompt)."""

    def __init__(self, fixtures_dir=None):
        self.fixtures_dir = Path(fixtures_dir or _DEFAULT_FIXTURES)

    def complete(self, bundle: PromptBundle) -> str:
        path = self.fixtures_dir / f"{stub_key(bundle.user_text)}.json"
        if path.exists():
            return path.read_text(encoding="utf-8")
        return json.dumps({
            "message": "I can animate the elements in this SVG. Describe the "
                       "motion you have in mind and which group it targets."
        })


class FailingClient(ModelClient):
    """Always raises; stands in for an unreachable endpoint in tests."""

    def complete(self, bundle: PromptBundle) -> str:
        raise ClientError("model endpoint unreachable")


class OpenAICompatibleClient(ModelClient):
    """Minimal chat-completions client for OpenAI-compatible endpoints.

    Credentials come from SWAY_API_KEY; base URL from SWAY_API_BASE.
    """

    def __init__(self, model: str | None = None, timeout: float = 60.0):
        self.base_url = os.environ.get("SWAY_API_BASE", "https://api.openai.com/v1")
        self.api_key = os.environ.get("SWAY_API_KEY")
        self.model = model or os.environ.get("SWAY_MODEL", "gpt-4o-mini")
        self.timeout = timeout

    def complete(self, bundle: PromptBundle) -> str:
        if not self.api_key:
            raise ClientError("SWAY_API_KEY not set")
        import httpx

        messages = [{"role": "system", "content": bundle.system_text}]
        for role, text in bundle.history:
            messages.append({"role": role, "content": text})
        user_content = (
            f"{bundle.user_text}\n\nSVG:\n{bundle.svg_text}\n\n"
            f"Output schema:\n{bundle.output_schema}\n\n"
            f"Example:\n{bundle.one_shot_example}"
        )
        if bundle.referenced_specs:
            user_content += "\n\nReferenced versions:\n" + "\n".join(bundle.referenced_specs)
        messages.append({"role": "user", "content": user_content})
        try:
            resp = httpx.post(
                self.base_url.rstrip("/") + "/chat/completions",
                headers={"Authorization": f"Bearer {self.api_key}"},
                json={"model": self.model, "messages": messages},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except Exception as exc:  # transport errors become ClientError
            raise ClientError(str(exc)) from exc


def default_client() -> ModelClient:
    """Real client when credentials are configured, stub otherwise."""
    if os.environ.get("SWAY_API_KEY"):
        return OpenAICompatibleClient()
    return StubClient()


def generate_version(session, client: ModelClient, user_text: str,
                     base_version_ids=(), budget: int | None = None):
    """Run one generation round. Returns (AssistantReply, Version or None);
    the version (if any) is appended to the session's version list."""
    budget = budget or getattr(client, "max_context_tokens", DEFAULT_CONTEXT_BUDGET)
    bundle = build_prompt(session, user_text, base_version_ids, budget)
    try:
        raw = client.complete(bundle)
    except ClientError:
        raise
    except Exception as exc:
        raise ClientError(str(exc)) from exc
    reply = parse_reply(raw)
    if not reply.clips:
        return reply, None
    warnings = check_encoding_conflict(session.manifest, reply.clips)
    next_id = max((v.id for v in session.versions), default=0) + 1
    group_clips = [
        GroupClip(
            clip=clip,
            delay_ms=0.0,
            duration_ms=1000.0,
            offset_ms=500.0,
            coordination=LayerCentric(direction="ascending"),
        )
        for clip in reply.clips
    ]
    version = Version(
        id=next_id,
        clips=group_clips,
        base_versions=list(base_version_ids),
        warnings=warnings,
    )
    session.versions.append(version)
    return reply, version
