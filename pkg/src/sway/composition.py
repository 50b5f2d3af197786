"""Global timeline arrangement and time sampling of the animation state."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field, replace

from .clips import Color, GroupClip, clip_value_at
from .coordination import WeightAssignment, assign_weights, element_start_time
from .errors import InvalidDuration, MissingAssignment, UnknownTrack
from .svg_model import SVG_NS, XLINK_NS, VectorDocument, bounding_box, parse_document
import xml.etree.ElementTree as ET


@dataclass(frozen=True)
class Timeline:
    tracks: tuple  # GroupClip, in track order
    version_id: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))


@dataclass(frozen=True)
class FrameSnapshot:
    time: float
    values: dict  # element index -> {property: value}

    def to_json(self) -> dict:
        out = {}
        for idx, props in self.values.items():
            out[str(idx)] = {
                p: (v.to_hex() if isinstance(v, Color) else v) for p, v in props.items()
            }
        return {"time": self.time, "values": out}


def arrange(timeline: Timeline, track_ordinal: int, new_delay_ms: float,
            new_duration_ms: float) -> Timeline:
    """Return a timeline with one track's delay/duration replaced (value
    semantics; keyframe offsets are normalized so duration rescales the clip)."""
    if not 0 <= track_ordinal < len(timeline.tracks):
        raise UnknownTrack(f"track {track_ordinal} of {len(timeline.tracks)}")
    if new_duration_ms <= 0:
        raise InvalidDuration(f"duration must be > 0, got {new_duration_ms}")
    if new_delay_ms < 0:
        raise InvalidDuration(f"delay must be >= 0, got {new_delay_ms}")
    tracks = list(timeline.tracks)
    tracks[track_ordinal] = tracks[track_ordinal].with_timing(new_delay_ms, new_duration_ms)
    return replace(timeline, tracks=tuple(tracks))


def compute_assignments(doc: VectorDocument, timeline: Timeline) -> list:
    """Weight assignment for every track, in track order."""
    return [
        assign_weights(doc, gc.clip.selector, gc.coordination)
        for gc in timeline.tracks
    ]


def _assignment_for(assignments, ordinal: int) -> WeightAssignment:
    try:
        a = assignments[ordinal]
    except (IndexError, KeyError, TypeError):
        a = None
    if a is None:
        raise MissingAssignment(f"no weight assignment for track {ordinal}")
    return a


def total_duration(timeline: Timeline, assignments) -> float:
    """End of the last track's first pass: max(D + O * max_w + duration)."""
    end = 0.0
    for ordinal, gc in enumerate(timeline.tracks):
        a = _assignment_for(assignments, ordinal)
        end = max(end, gc.delay_ms + gc.offset_ms * a.max_weight + gc.duration_ms)
    return end


def sample(doc: VectorDocument, timeline: Timeline, assignments,
           t: float) -> FrameSnapshot:
    """Per-element property state at time t.

    Later tracks win when two clips animate the same property of the same
    element.
    """
    values: dict = {}
    for ordinal, gc in enumerate(timeline.tracks):
        a = _assignment_for(assignments, ordinal)
        clip = gc.clip
        for idx, w in a.weights.items():
            start = element_start_time(gc.delay_ms, gc.offset_ms, w)
            local_u = (t - start) / gc.duration_ms
            props = clip_value_at(clip, local_u)
            if props:
                values.setdefault(idx, {}).update(props)
    return FrameSnapshot(time=t, values=values)


# --- static rendering -------------------------------------------------------

_BAKE_MARK = "data-sway-anim"


def _transform_suffix(doc: VectorDocument, idx: int, props: dict) -> str:
    tx = props.get("translateX", 0.0)
    ty = props.get("translateY", 0.0)
    rot = props.get("rotate", 0.0)
    scale = props.get("scale", None)
    parts = []
    if tx or ty:
        parts.append(f"translate({_fmt(tx)} {_fmt(ty)})")
    if rot or scale is not None:
        cx, cy = bounding_box(doc, idx).center
        if rot:
            parts.append(f"rotate({_fmt(rot)} {_fmt(cx)} {_fmt(cy)})")
        if scale is not None and scale != 1.0:
            # scale about the bbox center so elements grow in place
            parts.append(f"translate({_fmt(cx)} {_fmt(cy)})")
            parts.append(f"scale({_fmt(scale)})")
            parts.append(f"translate({_fmt(-cx)} {_fmt(-cy)})")
    return " ".join(parts)


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_static(doc: VectorDocument, snapshot: FrameSnapshot) -> VectorDocument:
    """Bake a snapshot into a new document (attributes/transforms applied).

    Untouched elements are preserved; re-baking replaces any previously baked
    animation transform instead of stacking it.
    """
    root = copy.deepcopy(doc._root)
    # rebuild index -> element mapping on the copied tree via parallel iteration
    original_nodes = list(doc._et_by_index.items())
    clone_of = {}
    orig_iter = list(doc._root.iter())
    copy_iter = list(root.iter())
    node_map = dict(zip(orig_iter, copy_iter))
    for idx, orig_el in original_nodes:
        clone_of[idx] = node_map[orig_el]

    for idx, props in snapshot.values.items():
        el = clone_of.get(idx)
        if el is None:
            raise IndexError(f"snapshot element {idx} not in document")
        if "opacity" in props:
            el.set("opacity", _fmt(props["opacity"]))
        if "fill-color" in props:
            el.set("fill", props["fill-color"].to_hex())
        if "stroke-color" in props:
            el.set("stroke", props["stroke-color"].to_hex())
        if "stroke-width" in props:
            el.set("stroke-width", _fmt(props["stroke-width"]))
        if "filter-blur" in props:
            blur = props["filter-blur"]
            style = [s for s in (el.get("style") or "").split(";")
                     if s.strip() and not s.strip().startswith("filter:")]
            if blur:
                style.append(f"filter: blur({_fmt(blur)}px)")
            el.set("style", ";".join(style)) if style else el.attrib.pop("style", None)
        suffix = _transform_suffix(doc, idx, props)
        base_tf = el.get("transform", "")
        prev = el.get(_BAKE_MARK)
        if prev and base_tf.endswith(prev):
            base_tf = base_tf[: -len(prev)].rstrip()
        if suffix:
            el.set("transform", (base_tf + " " + suffix).strip())
            el.set(_BAKE_MARK, suffix)
        else:
            if base_tf:
                el.set("transform", base_tf)
            elif "transform" in el.attrib:
                del el.attrib["transform"]
            el.attrib.pop(_BAKE_MARK, None)

    ET.register_namespace("", SVG_NS)
    ET.register_namespace("xlink", XLINK_NS)
    text = ET.tostring(root, encoding="unicode")
    return parse_document(text, flatten_tol=doc.flatten_tol)
