"""Parse SVG documents into a queryable, immutable model.

The model exposes element groups (by class), geometry in root user space,
data values, rendering order, and a token-budget condenser for prompts.
"""

from __future__ import annotations

import copy
import hashlib
import math
import random
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .errors import (
    BudgetTooSmall,
    DegenerateGeometry,
    MalformedSvg,
    MissingViewBox,
    NonNumericAttribute,
)
from .geometry import (
    DEFAULT_FLATTEN_TOL,
    AffineTransform,
    ellipse_outline,
    flatten_path,
    parse_transform,
    rect_outline,
)

SVG_NS = "http://www.w3.org/2000/svg"
XLINK_NS = "http://www.w3.org/1999/xlink"

# containers and shapes that participate in the element model
_CONTAINER_TAGS = {"g", "svg", "a"}
_SHAPE_TAGS = {"circle", "ellipse", "rect", "line", "polyline", "polygon", "path", "text"}
_SKIP_TAGS = {"defs", "metadata", "title", "desc", "style", "script", "filter",
              "linearGradient", "radialGradient", "pattern", "clipPath", "mask",
              "symbol", "marker"}

ENCODING_CHANNELS = (
    "fill-color",
    "stroke-color",
    "size",
    "x-position",
    "y-position",
    "opacity",
    "shape",
)


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _parse_classes(value: str | None) -> frozenset:
    if not value:
        return frozenset()
    return frozenset(c for c in value.split() if c)


@dataclass(frozen=True)
class Rect:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if self.max_x < self.min_x or self.max_y < self.min_y:
            raise ValueError("inverted rect")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def center(self) -> tuple:
        return ((self.min_x + self.max_x) / 2.0, (self.min_y + self.max_y) / 2.0)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def union(self, other: "Rect") -> "Rect":
        return Rect(
            min(self.min_x, other.min_x),
            min(self.min_y, other.min_y),
            max(self.max_x, other.max_x),
            max(self.max_y, other.max_y),
        )


@dataclass(frozen=True)
class ElementNode:
    index: int
    tag: str
    classes: frozenset
    data_attributes: dict
    local_transform: AffineTransform
    geometry_outline: list  # polylines in local space
    parent: int | None
    children: tuple = ()


@dataclass(frozen=True)
class ManifestEntry:
    selector: str
    channel: str
    meaning: str = ""

    def __post_init__(self):
        if not self.selector:
            raise ValueError("manifest selector must be non-empty")
        if self.channel not in ENCODING_CHANNELS:
            raise ValueError(f"unknown encoding channel: {self.channel}")


@dataclass(frozen=True)
class EncodingManifest:
    entries: tuple

    @staticmethod
    def from_json(data: dict) -> "EncodingManifest":
        entries = tuple(
            ManifestEntry(e["selector"], e["channel"], e.get("meaning", ""))
            for e in data.get("entries", [])
        )
        return EncodingManifest(entries)

    def to_json(self) -> dict:
        return {
            "entries": [
                {"selector": e.selector, "channel": e.channel, "meaning": e.meaning}
                for e in self.entries
            ]
        }


@dataclass
class VectorDocument:
    viewbox: Rect
    elements: list
    styles: str
    source_digest: str
    source_text: str
    flatten_tol: float = DEFAULT_FLATTEN_TOL
    _root: ET.Element = field(repr=False, default=None)
    _et_by_index: dict = field(repr=False, default_factory=dict)
    _bbox_cache: dict = field(repr=False, default_factory=dict)

    def element(self, index: int) -> ElementNode:
        if not 0 <= index < len(self.elements):
            raise IndexError(f"element index {index} out of range")
        return self.elements[index]


def _inline_uses(root: ET.Element) -> None:
    """Replace <use> references with a translated copy of their target."""
    by_id = {}
    for el in root.iter():
        eid = el.get("id")
        if eid:
            by_id[eid] = el
    parents = {child: parent for parent in root.iter() for child in parent}

    for _ in range(8):  # bounded in case of chained/cyclic uses
        uses = [el for el in root.iter() if _localname(el.tag) == "use"]
        if not uses:
            break
        for use in uses:
            href = use.get("href") or use.get(f"{{{XLINK_NS}}}href") or ""
            target = by_id.get(href.lstrip("#"))
            parent = parents.get(use)
            if parent is None:
                continue
            idx = list(parent).index(use)
            parent.remove(use)
            if target is None or target is use:
                continue
            clone = copy.deepcopy(target)
            clone.attrib.pop("id", None)
            tx = float(use.get("x", 0) or 0)
            ty = float(use.get("y", 0) or 0)
            tf = use.get("transform", "")
            if tx or ty:
                tf = (tf + f" translate({tx},{ty})").strip()
            if tf:
                existing = clone.get("transform", "")
                clone.set("transform", (tf + " " + existing).strip())
            if use.get("class"):
                clone.set("class", (use.get("class") + " " + clone.get("class", "")).strip())
            parent.insert(idx, clone)
            parents.update({child: p for p in root.iter() for child in p})


def _shape_outlines(el: ET.Element, tag: str, tol: float) -> list:
    def num(name, default=0.0):
        raw = el.get(name)
        if raw is None:
            return default
        try:
            return float(re.sub(r"(px|pt|mm|cm|in|em)$", "", raw.strip()))
        except ValueError:
            return default

    if tag == "circle":
        r = num("r")
        return [ellipse_outline(num("cx"), num("cy"), r, r, tol)]
    if tag == "ellipse":
        return [ellipse_outline(num("cx"), num("cy"), num("rx"), num("ry"), tol)]
    if tag == "rect":
        return [rect_outline(num("x"), num("y"), num("width"), num("height"))]
    if tag == "line":
        return [[(num("x1"), num("y1")), (num("x2"), num("y2"))]]
    if tag in ("polyline", "polygon"):
        nums = [float(v) for v in re.findall(r"[-+]?(?:\d*\.\d+|\d+\.?)(?:[eE][-+]?\d+)?", el.get("points", ""))]
        pts = list(zip(nums[0::2], nums[1::2]))
        if tag == "polygon" and len(pts) >= 2:
            pts.append(pts[0])
        return [pts] if pts else []
    if tag == "path":
        return flatten_path(el.get("d", ""), tol)
    if tag == "text":
        # no font metrics: approximate by the anchor point
        return [[(num("x"), num("y"))]]
    return []


def parse_document(data, flatten_tol: float = DEFAULT_FLATTEN_TOL) -> VectorDocument:
    """Parse UTF-8 SVG text (or bytes) into a VectorDocument.

    Elements are listed in document (rendering) order. Raises MalformedSvg on
    XML errors and MissingViewBox when neither viewBox nor width/height exist.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedSvg(str(exc), position=getattr(exc, "position", None)) from exc
    if _localname(root.tag) != "svg":
        raise MalformedSvg(f"root element is <{_localname(root.tag)}>, expected <svg>")

    vb = root.get("viewBox")
    if vb:
        parts = [float(v) for v in re.split(r"[\s,]+", vb.strip()) if v]
        if len(parts) != 4:
            raise MissingViewBox(f"viewBox has {len(parts)} numbers, expected 4")
        x, y, w, h = parts
    else:
        try:
            w = float(re.sub(r"[a-z%]+$", "", (root.get("width") or "").strip()))
            h = float(re.sub(r"[a-z%]+$", "", (root.get("height") or "").strip()))
        except ValueError:
            raise MissingViewBox("no viewBox and width/height not numeric")
        if not root.get("width") or not root.get("height"):
            raise MissingViewBox("no viewBox and no width/height attributes")
        x, y = 0.0, 0.0
    if w <= 0 or h <= 0:
        raise MissingViewBox(f"viewBox has non-positive size {w}x{h}")
    viewbox = Rect(x, y, x + w, y + h)

    _inline_uses(root)

    styles = "\n".join(
        (el.text or "") for el in root.iter() if _localname(el.tag) == "style"
    ).strip()

    elements: list[ElementNode] = []
    et_by_index: dict[int, ET.Element] = {}
    children_map: dict[int, list] = {}

    def walk(el: ET.Element, parent_index: int | None):
        for child in el:
            tag = _localname(child.tag)
            if tag in _SKIP_TAGS:
                continue
            if tag not in _CONTAINER_TAGS and tag not in _SHAPE_TAGS:
                continue
            index = len(elements)
            data_attrs = {
                k[5:]: v for k, v in child.attrib.items() if k.startswith("data-")
            }
            local_tf = parse_transform(child.get("transform"))
            if tag == "svg":
                # nested svg positions via x/y; its own viewBox scaling is not applied
                nx = float(child.get("x", 0) or 0)
                ny = float(child.get("y", 0) or 0)
                if nx or ny:
                    local_tf = local_tf.compose(AffineTransform.translate(nx, ny))
            outlines = _shape_outlines(child, tag, flatten_tol) if tag in _SHAPE_TAGS else []
            node = ElementNode(
                index=index,
                tag=tag,
                classes=_parse_classes(child.get("class")),
                data_attributes=data_attrs,
                local_transform=local_tf,
                geometry_outline=outlines,
                parent=parent_index,
            )
            elements.append(node)
            et_by_index[index] = child
            children_map.setdefault(index, [])
            if parent_index is not None:
                children_map.setdefault(parent_index, []).append(index)
            if tag in _CONTAINER_TAGS:
                walk(child, index)

    walk(root, None)
    elements = [
        ElementNode(
            n.index, n.tag, n.classes, n.data_attributes, n.local_transform,
            n.geometry_outline, n.parent, tuple(children_map.get(n.index, [])),
        )
        for n in elements
    ]

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return VectorDocument(
        viewbox=viewbox,
        elements=elements,
        styles=styles,
        source_digest=digest,
        source_text=text,
        flatten_tol=flatten_tol,
        _root=root,
        _et_by_index=et_by_index,
    )


def select_group(doc: VectorDocument, selector: str) -> list:
    """Indices of elements whose class set contains the selector, document order."""
    name = selector.lstrip(".")
    if not name:
        raise ValueError("selector must be non-empty")
    return [n.index for n in doc.elements if name in n.classes]


def _ctm(doc: VectorDocument, index: int) -> AffineTransform:
    chain = []
    i = index
    while i is not None:
        node = doc.elements[i]
        chain.append(node.local_transform)
        i = node.parent
    tf = AffineTransform.identity()
    for t in reversed(chain):
        tf = tf.compose(t)
    return tf


def bounding_box(doc: VectorDocument, index: int) -> Rect:
    """Axis-aligned box of the element's flattened outline in root user space,
    including all descendants and ancestor transforms."""
    cached = doc._bbox_cache.get(index)
    if cached is not None:
        return cached
    base = _ctm(doc, index)
    min_x = min_y = math.inf
    max_x = max_y = -math.inf

    def visit(i: int, tf: AffineTransform):
        nonlocal min_x, min_y, max_x, max_y
        node = doc.elements[i]
        for poly in node.geometry_outline:
            for x, y in tf.apply_polyline(poly):
                if x < min_x:
                    min_x = x
                if x > max_x:
                    max_x = x
                if y < min_y:
                    min_y = y
                if y > max_y:
                    max_y = y
        for ci in node.children:
            visit(ci, tf.compose(doc.elements[ci].local_transform))

    visit(index, base)
    if min_x is math.inf:
        raise DegenerateGeometry(
            f"element {index} (<{doc.elements[index].tag}>) has no renderable outline"
        )
    rect = Rect(min_x, min_y, max_x, max_y)
    doc._bbox_cache[index] = rect
    return rect


def midpoint(doc: VectorDocument, index: int) -> tuple:
    """Center of the element's bounding box (the element's 2D point abstraction)."""
    return bounding_box(doc, index).center


def data_value(doc: VectorDocument, index: int, attribute: str | None = None) -> float:
    """Numeric data value of an element.

    Prefers the named data-* attribute; falls back to the bounding-box
    diagonal length as a size proxy.
    """
    node = doc.element(index)
    if attribute is not None:
        key = attribute[5:] if attribute.startswith("data-") else attribute
        if key in node.data_attributes:
            raw = node.data_attributes[key]
            try:
                return float(raw)
            except ValueError:
                raise NonNumericAttribute(
                    f"element {index}: data-{key}={raw!r} is not numeric"
                )
    return bounding_box(doc, index).diagonal


# --- prompt condensation ----------------------------------------------------

# attributes that affect appearance; everything else is stripped
_KEEP_ATTRS = {
    "id", "class", "transform", "fill", "stroke", "stroke-width", "opacity",
    "fill-opacity", "stroke-opacity", "style",
    "cx", "cy", "r", "rx", "ry", "x", "y", "width", "height",
    "x1", "y1", "x2", "y2", "points", "d",
    "viewBox", "xmlns", "preserveAspectRatio",
}


def estimate_tokens(text: str) -> int:
    """Crude byte-based token estimate (4 bytes per token)."""
    return -(-len(text.encode("utf-8")) // 4)


def _serialize(root: ET.Element) -> str:
    ET.register_namespace("", SVG_NS)
    ET.register_namespace("xlink", XLINK_NS)
    return ET.tostring(root, encoding="unicode")


@dataclass
class CondenseReport:
    kept: dict  # combo label -> kept count
    total: dict  # combo label -> original count
    stripped_attributes: int = 0

    def notes(self) -> list:
        out = []
        for label, n in sorted(self.total.items()):
            k = self.kept.get(label, 0)
            if k < n:
                out.append(f"{label}: kept {k} of {n}")
        return out


def _combo_label(tag: str, classes: frozenset) -> str:
    if classes:
        return ".".join(sorted(classes))
    return tag


def condense_for_prompt(doc: VectorDocument, token_budget: int, seed: int = 0):
    """Shrink the document under a token budget by stripping non-visual
    attributes and randomly sampling repetitive sibling elements.

    Keeps at least one exemplar of every (tag, class-set) combination.
    Deterministic for a fixed seed. Returns (svg_text, CondenseReport).
    """
    if token_budget <= 0:
        raise ValueError("token_budget must be positive")
    if estimate_tokens(doc.source_text) <= token_budget:
        return doc.source_text, CondenseReport(kept={}, total={})

    root = copy.deepcopy(doc._root)

    stripped = 0
    for el in root.iter():
        for name in [k for k in el.attrib if k.rsplit("}", 1)[-1] not in _KEEP_ATTRS
                     and not k.rsplit("}", 1)[-1].startswith("data-")]:
            del el.attrib[name]
            stripped += 1

    # sibling runs of identical (tag, class-set) are the sampling unit
    rng = random.Random(seed)
    total: dict[str, int] = {}
    kept: dict[str, int] = {}
    runs = []  # (parent, label, [children])
    for parent in root.iter():
        groups: dict[tuple, list] = {}
        for child in parent:
            tag = _localname(child.tag)
            combo = (tag, _parse_classes(child.get("class")))
            groups.setdefault(combo, []).append(child)
        for (tag, classes), members in groups.items():
            label = _combo_label(tag, classes)
            total[label] = total.get(label, 0) + len(members)
            kept[label] = kept.get(label, 0) + len(members)
            if len(members) > 1:
                runs.append((parent, label, members))

    def cost(el):
        return len(ET.tostring(el, encoding="unicode"))

    estimate = estimate_tokens(_serialize(root))
    # round-robin over runs, dropping one random non-exemplar member at a time
    droppable = []
    for parent, label, members in runs:
        shuffled = members[1:]
        rng.shuffle(shuffled)
        droppable.append((parent, label, shuffled))
    while True:
        progress = True
        while estimate > token_budget and progress:
            progress = False
            for parent, label, pool in droppable:
                if estimate <= token_budget:
                    break
                if not pool:
                    continue
                victim = pool.pop()
                estimate -= -(-cost(victim) // 4)
                parent.remove(victim)
                kept[label] -= 1
                progress = True
        # the incremental estimate is approximate; re-check on the real output
        text = _serialize(root)
        estimate = estimate_tokens(text)
        if estimate <= token_budget:
            break
        if not any(pool for _, _, pool in droppable):
            raise BudgetTooSmall(
                f"minimal condensation is ~{estimate} tokens, "
                f"budget is {token_budget}"
            )
    report = CondenseReport(kept=kept, total=total, stripped_attributes=stripped)
    return text, report
