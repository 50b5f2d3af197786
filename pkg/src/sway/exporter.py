"""Portable animation programs: canonical export/import, a self-contained
runtime script with a play/pause/replay handle, and a baked CSS fallback."""

from __future__ import annotations

import copy
from dataclasses import dataclass
import xml.etree.ElementTree as ET

from .canonical import canonical_dumps, canonical_loads
from .clips import Color, GroupClip, clip_from_json, clip_to_json, interpolate_track
from .composition import Timeline
from .coordination import element_start_time, scheme_from_json, scheme_to_json
from .errors import EmptyTimeline, SchemaViolation, UnbakeableFeature, UnsupportedVersion
from .svg_model import SVG_NS, XLINK_NS, VectorDocument, select_group

FORMAT_VERSION = "1.0.0"


@dataclass(frozen=True)
class AnimationProgram:
    format_version: str
    viewbox: tuple  # (min_x, min_y, max_x, max_y)
    tracks: tuple  # track dicts (clip schema + timing + coordination schema)
    provenance: dict

    def to_json(self) -> dict:
        return {
            "format_version": self.format_version,
            "viewbox": {
                "min_x": self.viewbox[0],
                "min_y": self.viewbox[1],
                "max_x": self.viewbox[2],
                "max_y": self.viewbox[3],
            },
            "tracks": list(self.tracks),
            "provenance": dict(self.provenance),
        }

    def serialize(self) -> str:
        return canonical_dumps(self.to_json())


def export_program(doc: VectorDocument, timeline: Timeline,
                   session_id: str = "", version_id: int | None = None) -> AnimationProgram:
    """Package a timeline as a portable program.

    Coordination parameters are viewBox-relative; weights are not baked and
    get recomputed at runtime from live geometry.
    """
    if not timeline.tracks:
        raise EmptyTimeline("cannot export an empty timeline")
    tracks = []
    for gc in timeline.tracks:
        tracks.append({
            "clip": clip_to_json(gc.clip),
            "delay": float(gc.delay_ms),
            "duration": float(gc.duration_ms),
            "offset": float(gc.offset_ms),
            "coordination": scheme_to_json(gc.coordination),
        })
    vb = doc.viewbox
    return AnimationProgram(
        format_version=FORMAT_VERSION,
        viewbox=(vb.min_x, vb.min_y, vb.max_x, vb.max_y),
        tracks=tuple(tracks),
        provenance={
            "session_id": session_id,
            "version_id": version_id,
            "source_digest": doc.source_digest,
        },
    )


def _require(data, key, path):
    if not isinstance(data, dict) or key not in data:
        raise SchemaViolation("missing required field", f"{path}.{key}")
    return data[key]


def import_program(json_text: str):
    """Parse a serialized program back into (Timeline, AnimationProgram)."""
    data = canonical_loads(json_text)
    fv = _require(data, "format_version", "$")
    if not isinstance(fv, str) or fv.split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise UnsupportedVersion(f"format_version {fv!r}; this build reads {FORMAT_VERSION}")
    vb = _require(data, "viewbox", "$")
    for key in ("min_x", "min_y", "max_x", "max_y"):
        _require(vb, key, "$.viewbox")
    raw_tracks = _require(data, "tracks", "$")
    tracks = []
    for i, rt in enumerate(raw_tracks):
        path = f"$.tracks[{i}]"
        clip_data = _require(rt, "clip", path)
        for key in ("delay", "duration", "offset", "coordination"):
            _require(rt, key, path)
        try:
            scheme = scheme_from_json(rt["coordination"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaViolation(str(exc), f"{path}.coordination")
        tracks.append(GroupClip(
            clip=clip_from_json(clip_data),
            delay_ms=float(rt["delay"]),
            duration_ms=float(rt["duration"]),
            offset_ms=float(rt["offset"]),
            coordination=scheme,
        ))
    program = AnimationProgram(
        format_version=fv,
        viewbox=(vb["min_x"], vb["min_y"], vb["max_x"], vb["max_y"]),
        tracks=tuple(data["tracks"]),
        provenance=dict(data.get("provenance", {})),
    )
    return Timeline(tracks=tuple(tracks)), program


# --- runtime script ---------------------------------------------------------

_SCRIPT_TEMPLATE = """\
// Generated animation module. Embeds its program and recomputes element
// weights online from the live SVG geometry, relative to the viewBox.
const PROGRAM = __PROGRAM_JSON__;

const MASK64 = (1n << 64n) - 1n;
function splitmix64(state) {
  state = (state + 0x9E3779B97F4A7C15n) & MASK64;
  let z = state;
  z = ((z ^ (z >> 30n)) * 0xBF58476D1CE4E5B9n) & MASK64;
  z = ((z ^ (z >> 27n)) * 0x94D049BB133111EBn) & MASK64;
  return (z ^ (z >> 31n)) & MASK64;
}
function randomUnit(seed, index) {
  const s = (BigInt.asUintN(64, BigInt(seed)) ^ BigInt(index)) & MASK64;
  return Number(splitmix64(s)) / 18446744073709551616;
}

function normalize(raw) {
  const lo = Math.min(...raw), hi = Math.max(...raw);
  if (hi === lo) return raw.map(() => 0);
  return raw.map((v) => (v - lo) / (hi - lo));
}
function projectOnLine(p, s, e) {
  const dx = e[0] - s[0], dy = e[1] - s[1];
  const t = ((p[0] - s[0]) * dx + (p[1] - s[1]) * dy) / (dx * dx + dy * dy);
  return Math.min(1, Math.max(0, t));
}
function radialScore(p, c) {
  return Math.hypot(p[0] - c[0], p[1] - c[1]);
}
function sketchProgress(p, pts) {
  let total = 0;
  for (let i = 1; i < pts.length; i++) {
    total += Math.hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1]);
  }
  let bestD2 = Infinity, bestArc = 0, arc = 0;
  for (let i = 1; i < pts.length; i++) {
    const a = pts[i - 1], b = pts[i];
    const dx = b[0] - a[0], dy = b[1] - a[1];
    const len = Math.hypot(dx, dy);
    if (len === 0) continue;
    let s = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (len * len);
    s = Math.min(1, Math.max(0, s));
    const qx = a[0] + s * dx, qy = a[1] + s * dy;
    const d2 = (p[0] - qx) ** 2 + (p[1] - qy) ** 2;
    const candArc = arc + s * len;
    if (d2 < bestD2 - 1e-12 || (Math.abs(d2 - bestD2) <= 1e-12 && candArc < bestArc)) {
      bestD2 = d2; bestArc = candArc;
    }
    arc += len;
  }
  return total > 0 ? bestArc / total : 0;
}

function viewBoxOf(svgRoot) {
  const vb = svgRoot.getAttribute && svgRoot.getAttribute("viewBox");
  if (vb) {
    const [x, y, w, h] = vb.trim().split(/[\\s,]+/).map(Number);
    return { minX: x, minY: y, width: w, height: h };
  }
  const p = PROGRAM.viewbox;
  return { minX: p.min_x, minY: p.min_y, width: p.max_x - p.min_x, height: p.max_y - p.min_y };
}
function relToUser(vb, p) {
  return [vb.minX + p[0] * vb.width, vb.minY + p[1] * vb.height];
}
function midpointOf(el) {
  const b = el.getBBox();
  return [b.x + b.width / 2, b.y + b.height / 2];
}
function dataValueOf(el, attr) {
  if (attr) {
    const raw = el.getAttribute("data-" + attr);
    if (raw !== null && raw !== "" && !Number.isNaN(Number(raw))) return Number(raw);
  }
  const b = el.getBBox();
  return Math.hypot(b.width, b.height);
}

function selectGroup(svgRoot, selector) {
  const name = selector.replace(/^\\./, "");
  return Array.from(svgRoot.querySelectorAll("." + name));
}

function computeWeights(svgRoot, track) {
  const elements = selectGroup(svgRoot, track.clip.selector);
  const coord = track.coordination;
  const vb = viewBoxOf(svgRoot);
  const n = elements.length;
  if (n === 0) return { elements, weights: [] };
  let raw;
  if (coord.mode === "random") {
    return { elements, weights: elements.map((_, i) => randomUnit(coord.seed, i)) };
  } else if (coord.mode === "layer") {
    raw = elements.map((_, i) => (coord.direction === "descending" ? -i : i));
  } else if (coord.mode === "data") {
    const values = elements.map((el) => dataValueOf(el, coord.attribute));
    if (coord.basis === "rank") {
      const order = values.map((v, i) => [v, i]).sort((a, b) => a[0] - b[0] || a[1] - b[1]);
      raw = new Array(n);
      order.forEach(([, i], rank) => { raw[i] = n > 1 ? rank / (n - 1) : 0; });
    } else {
      raw = values.slice();
    }
    if (coord.direction === "descending") raw = raw.map((v) => -v);
  } else if (coord.mode === "layout-radius") {
    const c = relToUser(vb, coord.center);
    raw = elements.map((el) => radialScore(midpointOf(el), c));
  } else if (coord.mode === "layout-projection") {
    const s = relToUser(vb, coord.start), e = relToUser(vb, coord.end);
    raw = elements.map((el) => projectOnLine(midpointOf(el), s, e));
  } else if (coord.mode === "layout-sketch") {
    const pts = coord.polyline.map((p) => relToUser(vb, p));
    raw = elements.map((el) => sketchProgress(midpointOf(el), pts));
  } else {
    raw = elements.map(() => 0);
  }
  return { elements, weights: normalize(raw) };
}

function computeStartTimes(svgRoot, track) {
  const { elements, weights } = computeWeights(svgRoot, track);
  return elements.map((el, i) => ({
    element: el,
    weight: weights[i],
    start: track.delay + weights[i] * track.offset,
  }));
}

const EASINGS = {
  linear: (u) => u,
  "ease-in-quad": (u) => u * u,
  "ease-out-quad": (u) => u * (2 - u),
  "ease-in-out-cubic": (u) => (u < 0.5 ? 4 * u ** 3 : 1 - (-2 * u + 2) ** 3 / 2),
  "sine-in-out": (u) => -(Math.cos(Math.PI * u) - 1) / 2,
};
function ease(name, u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return (EASINGS[name] || EASINGS.linear)(u);
}
function parseColor(hex) {
  const h = hex.replace("#", "");
  return [parseInt(h.slice(0, 2), 16), parseInt(h.slice(2, 4), 16), parseInt(h.slice(4, 6), 16)];
}
function lerpValue(a, b, t) {
  if (typeof a === "string") {
    const ca = parseColor(a), cb = parseColor(b);
    const mix = ca.map((v, i) => Math.floor(v + (cb[i] - v) * t + 0.5));
    return "#" + mix.map((v) => v.toString(16).padStart(2, "0")).join("");
  }
  return a + (b - a) * t;
}
function trackValue(keyframes, u) {
  if (u <= keyframes[0].offset) return keyframes[0].value;
  const last = keyframes[keyframes.length - 1];
  if (u >= last.offset) return last.value;
  for (let i = 0; i < keyframes.length - 1; i++) {
    const k0 = keyframes[i], k1 = keyframes[i + 1];
    if (u === k0.offset) return k0.value;
    if (u > k0.offset && u < k1.offset) {
      const local = (u - k0.offset) / (k1.offset - k0.offset);
      return lerpValue(k0.value, k1.value, ease(k0.easing || "linear", local));
    }
  }
  return last.value;
}
function clipValues(clip, localU) {
  let u = localU;
  if (localU < 0) u = 0;
  else if (localU > 1) u = clip.loop ? localU % 1 : 1;
  const out = {};
  for (const t of clip.tracks) out[t.property] = trackValue(t.keyframes, u);
  return out;
}

function bboxCenter(el) {
  const b = el.getBBox();
  return [b.x + b.width / 2, b.y + b.height / 2];
}
function applyProps(el, props, baseTransform, center) {
  if ("opacity" in props) el.setAttribute("opacity", String(props.opacity));
  if ("fill-color" in props) el.setAttribute("fill", props["fill-color"]);
  if ("stroke-color" in props) el.setAttribute("stroke", props["stroke-color"]);
  if ("stroke-width" in props) el.setAttribute("stroke-width", String(props["stroke-width"]));
  if ("filter-blur" in props) el.style && (el.style.filter = props["filter-blur"] ? `blur(${props["filter-blur"]}px)` : "");
  const parts = [];
  const tx = props.translateX || 0, ty = props.translateY || 0;
  if (tx || ty) parts.push(`translate(${tx} ${ty})`);
  if (props.rotate) parts.push(`rotate(${props.rotate} ${center[0]} ${center[1]})`);
  if ("scale" in props && props.scale !== 1) {
    parts.push(`translate(${center[0]} ${center[1]}) scale(${props.scale}) translate(${-center[0]} ${-center[1]})`);
  }
  if (parts.length || baseTransform) {
    el.setAttribute("transform", (baseTransform + " " + parts.join(" ")).trim());
  }
}

function createAnimation(svgRoot, options = {}) {
  const now = options.now || (() => (typeof performance !== "undefined" ? performance.now() : Date.now()));
  const raf = options.raf || (typeof requestAnimationFrame !== "undefined"
    ? requestAnimationFrame.bind(globalThis)
    : (cb) => setTimeout(() => cb(now()), 16));
  let targets = null;

  function init() {
    targets = PROGRAM.tracks.map((track) => ({
      track,
      entries: computeStartTimes(svgRoot, track).map((e) => ({
        ...e,
        baseTransform: e.element.getAttribute("transform") || "",
        center: bboxCenter(e.element),
      })),
    }));
  }

  function renderAt(t) {
    for (const { track, entries } of targets) {
      for (const entry of entries) {
        const localU = (t - entry.start) / track.duration;
        applyProps(entry.element, clipValues(track.clip, localU), entry.baseTransform, entry.center);
      }
    }
  }

  let playing = false;
  let origin = 0;   // wall-clock time mapped to t = pausedAt
  let pausedAt = 0;
  const loops = PROGRAM.tracks.some((tr) => tr.clip.loop);
  const end = Math.max(0, ...PROGRAM.tracks.map((tr) =>
    tr.delay + tr.offset + tr.duration));

  function tick() {
    if (!playing) return;
    const t = now() - origin;
    renderAt(t);
    if (!loops && t > end) { playing = false; pausedAt = end; return; }
    raf(tick);
  }

  const handle = {
    play() {
      if (targets === null || options.recompute === "always") init();
      if (playing) return;
      playing = true;
      origin = now() - pausedAt;
      raf(tick);
    },
    pause() {
      if (!playing) return;
      pausedAt = now() - origin;
      playing = false;
    },
    replay() {
      if (targets === null || options.recompute === "always") init();
      pausedAt = 0;
      playing = true;
      origin = now();
      raf(tick);
    },
  };
  return handle;
}

export { PROGRAM, createAnimation, computeStartTimes, computeWeights };
export default createAnimation;
"""


def emit_runtime_script(program: AnimationProgram) -> str:
    """ECMAScript module embedding the program JSON verbatim; its factory
    returns a play/pause/replay handle and recomputes weights online."""
    return _SCRIPT_TEMPLATE.replace("__PROGRAM_JSON__", program.serialize())


# --- baked CSS --------------------------------------------------------------

_CSS_EASINGS = {
    "linear": "linear",
    "ease-in-quad": "cubic-bezier(0.11, 0, 0.5, 0)",
    "ease-out-quad": "cubic-bezier(0.5, 1, 0.89, 1)",
    "ease-in-out-cubic": "cubic-bezier(0.65, 0, 0.35, 1)",
    "sine-in-out": "cubic-bezier(0.37, 0, 0.63, 1)",
}

_TRANSFORM_PROPS = ("translateX", "translateY", "rotate", "scale")


def _fmt_ms(v: float) -> str:
    return f"{v:g}ms"


def _pct(offset: float) -> str:
    return f"{offset * 100:g}%"


def _css_decls_at(clip, offset: float, center) -> list:
    """Declarations for one keyframe percent: transform combined, styles direct."""
    decls = []
    transform_parts = []
    for track in clip.tracks:
        value = interpolate_track(track, offset)
        prop = track.property
        if prop == "translateX":
            transform_parts.append(("tx", value))
        elif prop == "translateY":
            transform_parts.append(("ty", value))
        elif prop == "rotate":
            transform_parts.append(("rot", value))
        elif prop == "scale":
            transform_parts.append(("scale", value))
        elif prop == "opacity":
            decls.append(f"opacity: {value:g}")
        elif prop == "fill-color":
            decls.append(f"fill: {value.to_hex()}")
        elif prop == "stroke-color":
            decls.append(f"stroke: {value.to_hex()}")
        elif prop == "stroke-width":
            decls.append(f"stroke-width: {value:g}")
        elif prop == "filter-blur":
            decls.append(f"filter: blur({value:g}px)")
    if transform_parts:
        parts = []
        d = dict(transform_parts)
        tx, ty = d.get("tx", 0.0), d.get("ty", 0.0)
        if "tx" in d or "ty" in d:
            parts.append(f"translate({tx:g}px, {ty:g}px)")
        if "rot" in d:
            parts.append(f"rotate({d['rot']:g}deg)")
        if "scale" in d:
            parts.append(f"scale({d['scale']:g})")
        decls.insert(0, "transform: " + " ".join(parts))
        decls.insert(0, f"transform-origin: {center[0]:g}px {center[1]:g}px")
    return decls


def bake_css(doc: VectorDocument, timeline: Timeline, assignments):
    """Freeze a timeline into (svg_text, css_text) with per-element delays.

    Weights are frozen at bake time; runtime geometry changes are not
    reflected (lossy relative to the runtime script).
    """
    from .composition import _assignment_for  # shared lookup/error behavior
    from .svg_model import bounding_box

    unbakeable = []
    for ordinal, gc in enumerate(timeline.tracks):
        if not select_group(doc, gc.clip.selector):
            unbakeable.append(f"track {ordinal}: selector {gc.clip.selector!r} "
                              "matches no rendered elements")
    if unbakeable:
        raise UnbakeableFeature(unbakeable)

    root = copy.deepcopy(doc._root)
    node_map = dict(zip(doc._root.iter(), root.iter()))
    clone_of = {idx: node_map[el] for idx, el in doc._et_by_index.items()}

    css_parts = []
    element_animations: dict = {}
    for ordinal, gc in enumerate(timeline.tracks):
        a = _assignment_for(assignments, ordinal)
        clip = gc.clip
        anim_name = f"sway-t{ordinal}"
        indices = sorted(a.weights)
        # keyframe offsets: union across tracks so combined transforms stay exact
        offsets = sorted({k.offset for t in clip.tracks for k in t.keyframes})
        center = bounding_box(doc, indices[0]).center if indices else (0.0, 0.0)
        blocks = []
        for off in offsets:
            decls = _css_decls_at(clip, off, center)
            seg_easings = {t.property: next(
                (k.easing_out for k in t.keyframes if k.offset == off), None)
                for t in clip.tracks}
            names = {e for e in seg_easings.values() if e}
            if len(names) == 1:
                easing = names.pop()
                if easing != "linear":
                    decls.append(f"animation-timing-function: {_CSS_EASINGS[easing]}")
            blocks.append(f"  {_pct(off)} {{ " + "; ".join(decls) + "; }")
        css_parts.append(f"@keyframes {anim_name} {{\n" + "\n".join(blocks) + "\n}")

        iteration = "infinite" if clip.loop else "1"
        for idx in indices:
            start = element_start_time(gc.delay_ms, gc.offset_ms, a.weights[idx])
            marker = f"sway-e{idx}"
            el = clone_of[idx]
            existing = el.get("class", "")
            if marker not in existing.split():
                el.set("class", (existing + " " + marker).strip())
            # repr() keeps the delay lossless so it equals the engine's value
            element_animations.setdefault(idx, []).append(
                (marker,
                 f"{anim_name} {_fmt_ms(gc.duration_ms)} linear {start!r}ms "
                 f"{iteration} both")
            )

    for idx, anims in element_animations.items():
        marker = anims[0][0]
        decls = ", ".join(a[1] for a in anims)
        css_parts.append(f".{marker} {{ animation: {decls}; }}")

    ET.register_namespace("", SVG_NS)
    ET.register_namespace("xlink", XLINK_NS)
    svg_text = ET.tostring(root, encoding="unicode")
    return svg_text, "\n\n".join(css_parts)
