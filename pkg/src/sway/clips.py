"""Element-wise animation clips: keyframe tracks, easing, interpolation,
structural validation, and the version objects produced by generation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import UnknownEasing
from .svg_model import VectorDocument, select_group

PROPERTIES = (
    "translateX",
    "translateY",
    "rotate",
    "scale",
    "opacity",
    "fill-color",
    "stroke-color",
    "stroke-width",
    "filter-blur",
)

COLOR_PROPERTIES = ("fill-color", "stroke-color")


@dataclass(frozen=True)
class Color:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for ch in (self.r, self.g, self.b):
            if not 0 <= ch <= 255:
                raise ValueError(f"color channel {ch} out of [0,255]")

    @staticmethod
    def from_hex(text: str) -> "Color":
        text = text.lstrip("#")
        if len(text) == 3:
            text = "".join(c * 2 for c in text)
        if len(text) != 6:
            raise ValueError(f"bad hex color {text!r}")
        return Color(int(text[0:2], 16), int(text[2:4], 16), int(text[4:6], 16))

    def to_hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def lerp_value(a, b, t: float):
    if isinstance(a, Color):
        return Color(
            _round_half_up(a.r + (b.r - a.r) * t),
            _round_half_up(a.g + (b.g - a.g) * t),
            _round_half_up(a.b + (b.b - a.b) * t),
        )
    return a + (b - a) * t


EASINGS = {
    "linear": lambda u: u,
    "ease-in-quad": lambda u: u * u,
    "ease-out-quad": lambda u: u * (2.0 - u),
    "ease-in-out-cubic": lambda u: 4 * u**3 if u < 0.5 else 1 - (-2 * u + 2) ** 3 / 2,
    "sine-in-out": lambda u: -(math.cos(math.pi * u) - 1) / 2,
}


def apply_easing(easing: str, u: float) -> float:
    """Evaluate a named easing at u in [0,1]. f(0)=0, f(1)=1 exactly."""
    fn = EASINGS.get(easing)
    if fn is None:
        raise UnknownEasing(f"{easing!r}; supported: {sorted(EASINGS)}")
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return fn(u)


@dataclass(frozen=True)
class Keyframe:
    offset: float
    value: object  # float or Color
    easing_out: str = "linear"  # easing for the segment starting here


@dataclass(frozen=True)
class PropertyTrack:
    property: str
    keyframes: tuple

    def __post_init__(self):
        object.__setattr__(self, "keyframes", tuple(self.keyframes))


@dataclass(frozen=True)
class ClipSpec:
    selector: str
    tracks: tuple
    title: str = "Untitled clip"
    description: str = ""
    loop: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))


@dataclass(frozen=True)
class GroupClip:
    clip: ClipSpec
    delay_ms: float = 0.0
    duration_ms: float = 1000.0
    offset_ms: float = 500.0
    coordination: object = None  # a coordination scheme

    def with_timing(self, delay_ms: float, duration_ms: float) -> "GroupClip":
        return replace(self, delay_ms=delay_ms, duration_ms=duration_ms)


@dataclass
class Warning:
    channel: str
    selector: str
    rationale: str
    severity: str = "advisory"

    def to_json(self) -> dict:
        return {
            "channel": self.channel,
            "selector": self.selector,
            "rationale": self.rationale,
            "severity": self.severity,
        }


@dataclass
class Version:
    id: int
    clips: list  # GroupClip
    origin_message: int | None = None  # history entry ordinal
    base_versions: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


# --- structural validation --------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


def _track_diagnostics(track: PropertyTrack) -> list:
    out = []
    if track.property not in PROPERTIES:
        out.append(Diagnostic("UnknownProperty", track.property))
        return out
    kfs = track.keyframes
    if len(kfs) < 2:
        out.append(Diagnostic("TooFewKeyframes", f"{track.property}: {len(kfs)}"))
        return out
    offsets = [k.offset for k in kfs]
    if any(b <= a for a, b in zip(offsets, offsets[1:])):
        out.append(Diagnostic("NonMonotoneOffsets", f"{track.property}: {offsets}"))
    if offsets[0] != 0.0 or offsets[-1] != 1.0:
        out.append(Diagnostic("BadOffsetBounds",
                              f"{track.property}: first {offsets[0]}, last {offsets[-1]}"))
    wants_color = track.property in COLOR_PROPERTIES
    for k in kfs:
        if wants_color and not isinstance(k.value, Color):
            out.append(Diagnostic("WrongValueKind",
                                  f"{track.property} keyframe at {k.offset}"))
        if not wants_color and isinstance(k.value, Color):
            out.append(Diagnostic("WrongValueKind",
                                  f"{track.property} keyframe at {k.offset}"))
        if not wants_color and isinstance(k.value, (int, float)) and not math.isfinite(k.value):
            out.append(Diagnostic("NonFiniteValue",
                                  f"{track.property} keyframe at {k.offset}"))
        if k.easing_out not in EASINGS:
            out.append(Diagnostic("UnknownEasing", k.easing_out))
    return out


def validate_clip(clip: ClipSpec, doc: VectorDocument | None = None) -> list:
    """Structural diagnostics for a clip; empty list means clean.

    Passing a document additionally checks the selector against it.
    """
    out = []
    if not clip.selector:
        out.append(Diagnostic("EmptySelector", "clip has no selector"))
    elif doc is not None and not select_group(doc, clip.selector):
        out.append(Diagnostic("UnknownSelector", clip.selector))
    if not clip.title:
        out.append(Diagnostic("EmptyTitle", clip.selector))
    seen = set()
    for track in clip.tracks:
        if track.property in seen:
            out.append(Diagnostic("DuplicateProperty", track.property))
        seen.add(track.property)
        out.extend(_track_diagnostics(track))
    return out


# --- interpolation ----------------------------------------------------------


def interpolate_track(track: PropertyTrack, u: float):
    """Value of a track at normalized time u in [0,1].

    Exact keyframe offsets return the keyframe value exactly; between
    keyframes the segment's easing is applied before lerping.
    """
    kfs = track.keyframes
    if u <= kfs[0].offset:
        return kfs[0].value
    if u >= kfs[-1].offset:
        return kfs[-1].value
    for k0, k1 in zip(kfs, kfs[1:]):
        if u == k0.offset:
            return k0.value
        if k0.offset < u < k1.offset:
            local = (u - k0.offset) / (k1.offset - k0.offset)
            return lerp_value(k0.value, k1.value, apply_easing(k0.easing_out, local))
        if u == k1.offset:
            return k1.value
    return kfs[-1].value


def clip_value_at(clip: ClipSpec, local_u: float) -> dict:
    """Evaluate all tracks of a clip at an (unclamped) local time.

    Fill-backwards before 0, fill-forwards after 1; looping clips wrap via
    the fractional part.
    """
    if local_u < 0.0:
        u = 0.0
    elif local_u > 1.0:
        u = (local_u % 1.0) if clip.loop else 1.0
    else:
        u = local_u
    return {t.property: interpolate_track(t, u) for t in clip.tracks}


# --- clip JSON schema (also the assistant's structured-output shape) --------


def keyframe_to_json(k: Keyframe) -> dict:
    value = k.value.to_hex() if isinstance(k.value, Color) else float(k.value)
    out = {"offset": float(k.offset), "value": value}
    if k.easing_out != "linear":
        out["easing"] = k.easing_out
    return out


def clip_to_json(clip: ClipSpec) -> dict:
    return {
        "selector": clip.selector,
        "title": clip.title,
        "description": clip.description,
        "loop": clip.loop,
        "tracks": [
            {
                "property": t.property,
                "keyframes": [keyframe_to_json(k) for k in t.keyframes],
            }
            for t in clip.tracks
        ],
    }


def _value_from_json(property_name: str, raw):
    if property_name in COLOR_PROPERTIES and isinstance(raw, str):
        return Color.from_hex(raw)
    if isinstance(raw, str):
        # tolerate colors on unknown properties so validation can flag kinds
        try:
            return Color.from_hex(raw)
        except ValueError:
            return float("nan")
    return float(raw)


def clip_from_json(data: dict) -> ClipSpec:
    tracks = []
    for t in data.get("tracks", []):
        prop = t.get("property", "")
        kfs = [
            Keyframe(
                offset=float(k.get("offset", 0.0)),
                value=_value_from_json(prop, k.get("value", 0.0)),
                easing_out=k.get("easing", "linear"),
            )
            for k in t.get("keyframes", [])
        ]
        tracks.append(PropertyTrack(property=prop, keyframes=tuple(kfs)))
    return ClipSpec(
        selector=data.get("selector", ""),
        tracks=tuple(tracks),
        title=data.get("title", "Untitled clip"),
        description=data.get("description", ""),
        loop=bool(data.get("loop", False)),
    )
