"""Group-wise timing coordination: per-element weights and start times.

Weights are normalized to [0, 1] and stagger element start times within a
group via t = delay + weight * offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateLine, DegeneratePath, EmptyGroup, InvalidScheme
from .svg_model import VectorDocument, data_value, midpoint, select_group

_MASK64 = (1 << 64) - 1


def splitmix64(state: int) -> int:
    """One SplitMix64 step. Stable across platforms; used for random weights."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def random_unit(seed: int, index: int) -> float:
    """Deterministic uniform [0,1) draw keyed by (seed, element index)."""
    return splitmix64((seed ^ index) & _MASK64) / 2.0**64


@dataclass(frozen=True)
class DataCentric:
    mode = "data"
    direction: str = "ascending"  # ascending | descending
    basis: str = "rank"  # rank | value
    attribute: str | None = None

    def validate(self):
        if self.direction not in ("ascending", "descending"):
            raise InvalidScheme(f"direction {self.direction!r}")
        if self.basis not in ("rank", "value"):
            raise InvalidScheme(f"basis {self.basis!r}")


@dataclass(frozen=True)
class LayoutRadius:
    mode = "layout-radius"
    center: tuple = (0.5, 0.5)  # viewBox-relative

    def validate(self):
        if not all(math.isfinite(v) for v in self.center):
            raise InvalidScheme("center must be finite")


@dataclass(frozen=True)
class LayoutProjection:
    mode = "layout-projection"
    start: tuple = (0.0, 0.0)
    end: tuple = (1.0, 0.0)

    def validate(self):
        if not all(math.isfinite(v) for v in (*self.start, *self.end)):
            raise InvalidScheme("endpoints must be finite")
        if tuple(self.start) == tuple(self.end):
            raise InvalidScheme("projection line start equals end")


@dataclass(frozen=True)
class LayoutSketch:
    mode = "layout-sketch"
    polyline: tuple = ()

    def validate(self):
        pts = [tuple(p) for p in self.polyline]
        if len(pts) < 2:
            raise InvalidScheme("sketch polyline needs at least 2 points")
        if not all(math.isfinite(v) for p in pts for v in p):
            raise InvalidScheme("sketch points must be finite")
        if _polyline_length(pts) <= 0:
            raise InvalidScheme("sketch polyline has zero length")


@dataclass(frozen=True)
class LayerCentric:
    mode = "layer"
    direction: str = "ascending"

    def validate(self):
        if self.direction not in ("ascending", "descending"):
            raise InvalidScheme(f"direction {self.direction!r}")


@dataclass(frozen=True)
class Random:
    mode = "random"
    seed: int = 0

    def validate(self):
        if not isinstance(self.seed, int):
            raise InvalidScheme("seed must be an integer")


CoordinationScheme = (DataCentric, LayoutRadius, LayoutProjection, LayoutSketch,
                      LayerCentric, Random)


def scheme_to_json(scheme) -> dict:
    if isinstance(scheme, DataCentric):
        out = {"mode": "data", "direction": scheme.direction, "basis": scheme.basis}
        if scheme.attribute:
            out["attribute"] = scheme.attribute
        return out
    if isinstance(scheme, LayoutRadius):
        return {"mode": "layout-radius", "center": list(scheme.center)}
    if isinstance(scheme, LayoutProjection):
        return {"mode": "layout-projection", "start": list(scheme.start),
                "end": list(scheme.end)}
    if isinstance(scheme, LayoutSketch):
        return {"mode": "layout-sketch", "polyline": [list(p) for p in scheme.polyline]}
    if isinstance(scheme, LayerCentric):
        return {"mode": "layer", "direction": scheme.direction}
    if isinstance(scheme, Random):
        return {"mode": "random", "seed": scheme.seed}
    raise TypeError(f"not a coordination scheme: {scheme!r}")


def scheme_from_json(data: dict):
    mode = data.get("mode")
    if mode == "data":
        scheme = DataCentric(
            direction=data.get("direction", "ascending"),
            basis=data.get("basis", "rank"),
            attribute=data.get("attribute"),
        )
    elif mode == "layout-radius":
        scheme = LayoutRadius(center=tuple(data["center"]))
    elif mode == "layout-projection":
        scheme = LayoutProjection(start=tuple(data["start"]), end=tuple(data["end"]))
    elif mode == "layout-sketch":
        scheme = LayoutSketch(polyline=tuple(tuple(p) for p in data["polyline"]))
    elif mode == "layer":
        scheme = LayerCentric(direction=data.get("direction", "ascending"))
    elif mode == "random":
        scheme = Random(seed=int(data.get("seed", 0)))
    else:
        raise InvalidScheme(f"unknown coordination mode {mode!r}")
    scheme.validate()
    return scheme


@dataclass(frozen=True)
class WeightAssignment:
    weights: dict  # element index -> weight in [0, 1]
    scheme: object
    group: str

    @property
    def max_weight(self) -> float:
        return max(self.weights.values(), default=0.0)


def normalize(raw) -> list:
    """Min-max normalize to [0, 1]; all-equal (or singleton) input maps to 0."""
    if not raw:
        raise ValueError("raw scores must be non-empty")
    lo, hi = min(raw), max(raw)
    if hi == lo:
        return [0.0 for _ in raw]
    span = hi - lo
    return [(v - lo) / span for v in raw]


def project_on_line(p, start, end) -> float:
    """Normalized projection of p onto the segment start->end, clamped to [0,1]."""
    dx, dy = end[0] - start[0], end[1] - start[1]
    denom = dx * dx + dy * dy
    if denom == 0:
        raise DegenerateLine("projection line start equals end")
    s = ((p[0] - start[0]) * dx + (p[1] - start[1]) * dy) / denom
    return min(1.0, max(0.0, s))


def radial_score(p, center) -> float:
    """Euclidean distance from p to the center point."""
    return math.hypot(p[0] - center[0], p[1] - center[1])


def _polyline_length(pts) -> float:
    return sum(
        math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])
    )


def sketch_progress(p, polyline) -> float:
    """Arclength fraction [0,1] of the closest point to p on the polyline.

    Ties between equidistant points resolve to the smallest arclength.
    """
    pts = [tuple(q) for q in polyline]
    total = _polyline_length(pts)
    if total <= 0:
        raise DegeneratePath("sketch polyline has zero length")
    best_d2 = math.inf
    best_arc = 0.0
    arc = 0.0
    for a, b in zip(pts, pts[1:]):
        dx, dy = b[0] - a[0], b[1] - a[1]
        seg_len = math.hypot(dx, dy)
        if seg_len == 0:
            continue
        s = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (seg_len * seg_len)
        s = min(1.0, max(0.0, s))
        qx, qy = a[0] + s * dx, a[1] + s * dy
        d2 = (p[0] - qx) ** 2 + (p[1] - qy) ** 2
        cand_arc = arc + s * seg_len
        if d2 < best_d2 - 1e-12 or (abs(d2 - best_d2) <= 1e-12 and cand_arc < best_arc):
            best_d2 = d2
            best_arc = cand_arc
        arc += seg_len
    return best_arc / total


def _rel_to_user(doc: VectorDocument, p) -> tuple:
    vb = doc.viewbox
    return (vb.min_x + p[0] * vb.width, vb.min_y + p[1] * vb.height)


def user_to_relative(doc: VectorDocument, p) -> tuple:
    """Map a user-space point into viewBox-relative [0,1] coordinates."""
    vb = doc.viewbox
    return ((p[0] - vb.min_x) / vb.width, (p[1] - vb.min_y) / vb.height)


def assign_weights(doc: VectorDocument, group: str, scheme) -> WeightAssignment:
    """Compute normalized per-element weights for a group under a scheme.

    Spatial scheme parameters are viewBox-relative and mapped into user
    coordinates here. Random weights are used as drawn (already in [0,1)).
    """
    scheme.validate()
    indices = select_group(doc, group)
    if not indices:
        raise EmptyGroup(f"selector {group!r} matched no elements")

    if isinstance(scheme, Random):
        weights = {i: random_unit(scheme.seed, i) for i in indices}
        return WeightAssignment(weights=weights, scheme=scheme, group=group)

    if isinstance(scheme, DataCentric):
        values = [data_value(doc, i, scheme.attribute) for i in indices]
        if scheme.basis == "rank":
            order = sorted(range(len(indices)), key=lambda k: (values[k], k))
            n = len(indices)
            raw = [0.0] * n
            for rank, k in enumerate(order):
                raw[k] = rank / (n - 1) if n > 1 else 0.0
        else:
            raw = values
        if scheme.direction == "descending":
            raw = [-v for v in raw]
    elif isinstance(scheme, LayoutRadius):
        center = _rel_to_user(doc, scheme.center)
        raw = [radial_score(midpoint(doc, i), center) for i in indices]
    elif isinstance(scheme, LayoutProjection):
        start = _rel_to_user(doc, scheme.start)
        end = _rel_to_user(doc, scheme.end)
        raw = [project_on_line(midpoint(doc, i), start, end) for i in indices]
    elif isinstance(scheme, LayoutSketch):
        pts = [_rel_to_user(doc, p) for p in scheme.polyline]
        raw = [sketch_progress(midpoint(doc, i), pts) for i in indices]
    elif isinstance(scheme, LayerCentric):
        raw = [float(k) for k in range(len(indices))]
        if scheme.direction == "descending":
            raw = [-v for v in raw]
    else:
        raise InvalidScheme(f"unsupported scheme {scheme!r}")

    normed = normalize(raw)
    return WeightAssignment(
        weights=dict(zip(indices, normed)), scheme=scheme, group=group
    )


def element_start_time(delay_ms: float, offset_ms: float, weight: float) -> float:
    """Start time of one element within its group: t = D + w * O (milliseconds)."""
    return delay_ms + weight * offset_ms
