"""2D affine transforms, SVG path flattening, and shape outlines.

All outlines are polylines (lists of (x, y) tuples). Curves are flattened
to a configurable chordal tolerance.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

DEFAULT_FLATTEN_TOL = 0.1


@dataclass(frozen=True)
class AffineTransform:
    """2x3 affine matrix in SVG order: x' = a*x + c*y + e, y' = b*x + d*y + f."""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0
    e: float = 0.0
    f: float = 0.0

    @staticmethod
    def identity() -> "AffineTransform":
        return AffineTransform()

    @staticmethod
    def translate(tx: float, ty: float = 0.0) -> "AffineTransform":
        return AffineTransform(e=tx, f=ty)

    @staticmethod
    def scale(sx: float, sy: float | None = None) -> "AffineTransform":
        if sy is None:
            sy = sx
        return AffineTransform(a=sx, d=sy)

    @staticmethod
    def rotate(deg: float, cx: float = 0.0, cy: float = 0.0) -> "AffineTransform":
        rad = math.radians(deg)
        cos, sin = math.cos(rad), math.sin(rad)
        rot = AffineTransform(a=cos, b=sin, c=-sin, d=cos)
        if cx or cy:
            return (
                AffineTransform.translate(cx, cy)
                .compose(rot)
                .compose(AffineTransform.translate(-cx, -cy))
            )
        return rot

    def compose(self, other: "AffineTransform") -> "AffineTransform":
        """Return self @ other (apply `other` first, then self)."""
        return AffineTransform(
            a=self.a * other.a + self.c * other.b,
            b=self.b * other.a + self.d * other.b,
            c=self.a * other.c + self.c * other.d,
            d=self.b * other.c + self.d * other.d,
            e=self.a * other.e + self.c * other.f + self.e,
            f=self.b * other.e + self.d * other.f + self.f,
        )

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return (self.a * x + self.c * y + self.e, self.b * x + self.d * y + self.f)

    def apply_polyline(self, pts):
        a, b, c, d, e, f = self.a, self.b, self.c, self.d, self.e, self.f
        return [(a * x + c * y + e, b * x + d * y + f) for x, y in pts]

    def is_identity(self) -> bool:
        return self == AffineTransform()


_TRANSFORM_RE = re.compile(r"(matrix|translate|scale|rotate|skewX|skewY)\s*\(([^)]*)\)")
_NUM_RE = re.compile(r"[-+]?(?:\d*\.\d+|\d+\.?)(?:[eE][-+]?\d+)?")


def parse_transform(text: str | None) -> AffineTransform:
    """Parse an SVG transform attribute into a single matrix."""
    result = AffineTransform.identity()
    if not text:
        return result
    for name, argstr in _TRANSFORM_RE.findall(text):
        args = [float(m) for m in _NUM_RE.findall(argstr)]
        if name == "matrix" and len(args) == 6:
            t = AffineTransform(*args)
        elif name == "translate":
            t = AffineTransform.translate(args[0], args[1] if len(args) > 1 else 0.0)
        elif name == "scale":
            t = AffineTransform.scale(args[0], args[1] if len(args) > 1 else None)
        elif name == "rotate":
            if len(args) == 3:
                t = AffineTransform.rotate(args[0], args[1], args[2])
            else:
                t = AffineTransform.rotate(args[0])
        elif name == "skewX":
            t = AffineTransform(c=math.tan(math.radians(args[0])))
        elif name == "skewY":
            t = AffineTransform(b=math.tan(math.radians(args[0])))
        else:
            continue
        result = result.compose(t)
    return result


# --- curve flattening -------------------------------------------------------


def _flat_enough(p0, p1, p2, p3, tol):
    # control points within tol of the chord => curve within tol
    ux = 3.0 * p1[0] - 2.0 * p0[0] - p3[0]
    uy = 3.0 * p1[1] - 2.0 * p0[1] - p3[1]
    vx = 3.0 * p2[0] - p0[0] - 2.0 * p3[0]
    vy = 3.0 * p2[1] - p0[1] - 2.0 * p3[1]
    return max(ux * ux, vx * vx) + max(uy * uy, vy * vy) <= 16.0 * tol * tol


def flatten_cubic(p0, p1, p2, p3, tol, out, depth=0):
    """Append intermediate + end points of a cubic bezier to `out` (excludes p0)."""
    if depth > 24 or _flat_enough(p0, p1, p2, p3, tol):
        out.append(p3)
        return
    mid = lambda a, b: ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    p01, p12, p23 = mid(p0, p1), mid(p1, p2), mid(p2, p3)
    p012, p123 = mid(p01, p12), mid(p12, p23)
    p0123 = mid(p012, p123)
    flatten_cubic(p0, p01, p012, p0123, tol, out, depth + 1)
    flatten_cubic(p0123, p123, p23, p3, tol, out, depth + 1)


def flatten_quadratic(p0, p1, p2, tol, out):
    # elevate to cubic
    c1 = (p0[0] + 2.0 / 3.0 * (p1[0] - p0[0]), p0[1] + 2.0 / 3.0 * (p1[1] - p0[1]))
    c2 = (p2[0] + 2.0 / 3.0 * (p1[0] - p2[0]), p2[1] + 2.0 / 3.0 * (p1[1] - p2[1]))
    flatten_cubic(p0, c1, c2, p2, tol, out)


def _arc_point(cx, cy, rx, ry, phi, theta):
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    x = rx * math.cos(theta)
    y = ry * math.sin(theta)
    return (cx + cos_phi * x - sin_phi * y, cy + sin_phi * x + cos_phi * y)


def flatten_arc(p0, rx, ry, x_rot_deg, large_arc, sweep, p1, tol, out):
    """Flatten an SVG elliptical arc (endpoint parameterization) to `out`."""
    if rx == 0 or ry == 0 or p0 == p1:
        out.append(p1)
        return
    rx, ry = abs(rx), abs(ry)
    phi = math.radians(x_rot_deg % 360.0)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    dx, dy = (p0[0] - p1[0]) / 2.0, (p0[1] - p1[1]) / 2.0
    x1p = cos_phi * dx + sin_phi * dy
    y1p = -sin_phi * dx + cos_phi * dy
    lam = (x1p / rx) ** 2 + (y1p / ry) ** 2
    if lam > 1:
        s = math.sqrt(lam)
        rx, ry = rx * s, ry * s
    num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p
    den = rx * rx * y1p * y1p + ry * ry * x1p * x1p
    coef = math.sqrt(max(0.0, num / den)) if den else 0.0
    if large_arc == sweep:
        coef = -coef
    cxp = coef * rx * y1p / ry
    cyp = -coef * ry * x1p / rx
    cx = cos_phi * cxp - sin_phi * cyp + (p0[0] + p1[0]) / 2.0
    cy = sin_phi * cxp + cos_phi * cyp + (p0[1] + p1[1]) / 2.0

    def angle(ux, uy, vx, vy):
        dot = ux * vx + uy * vy
        norm = math.hypot(ux, uy) * math.hypot(vx, vy)
        ang = math.acos(max(-1.0, min(1.0, dot / norm)))
        if ux * vy - uy * vx < 0:
            ang = -ang
        return ang

    theta1 = angle(1, 0, (x1p - cxp) / rx, (y1p - cyp) / ry)
    dtheta = angle(
        (x1p - cxp) / rx, (y1p - cyp) / ry, (-x1p - cxp) / rx, (-y1p - cyp) / ry
    )
    if not sweep and dtheta > 0:
        dtheta -= 2 * math.pi
    elif sweep and dtheta < 0:
        dtheta += 2 * math.pi

    r = max(rx, ry)
    # segment count so the sagitta stays under tol
    if r > tol:
        step = 2.0 * math.acos(max(-1.0, 1.0 - tol / r))
    else:
        step = math.pi / 2
    n = max(2, int(math.ceil(abs(dtheta) / max(step, 1e-6))))
    for i in range(1, n):
        out.append(_arc_point(cx, cy, rx, ry, phi, theta1 + dtheta * i / n))
    out.append(p1)


# --- SVG path data ----------------------------------------------------------

_PATH_TOKEN_RE = re.compile(
    r"([MmLlHhVvCcSsQqTtAaZz])|([-+]?(?:\d*\.\d+|\d+\.?)(?:[eE][-+]?\d+)?)"
)


def flatten_path(d: str, tol: float = DEFAULT_FLATTEN_TOL) -> list[list[tuple]]:
    """Flatten SVG path data into a list of polylines, one per subpath."""
    tokens = _PATH_TOKEN_RE.findall(d or "")
    items: list = []
    for cmd, num in tokens:
        items.append(cmd if cmd else float(num))
    polylines: list[list[tuple]] = []
    cur: list[tuple] = []
    pos = (0.0, 0.0)
    start = (0.0, 0.0)
    prev_cubic_ctrl = None
    prev_quad_ctrl = None
    i = 0
    cmd = None
    while i < len(items):
        if isinstance(items[i], str):
            cmd = items[i]
            i += 1
        elif cmd in ("M", "m"):
            # implicit lineto after the first coordinate pair
            cmd = "L" if cmd == "M" else "l"
        if cmd is None:
            i += 1
            continue

        def take(n):
            nonlocal i
            vals = items[i : i + n]
            i += n
            return vals

        rel = cmd.islower()
        c = cmd.upper()
        if c == "Z":
            if cur:
                cur.append(start)
                polylines.append(cur)
                cur = []
            pos = start
            prev_cubic_ctrl = prev_quad_ctrl = None
            continue
        if c == "M":
            x, y = take(2)
            if rel:
                x, y = pos[0] + x, pos[1] + y
            if cur:
                polylines.append(cur)
            pos = start = (x, y)
            cur = [pos]
            prev_cubic_ctrl = prev_quad_ctrl = None
            continue
        if not cur:
            cur = [pos]
        if c == "L":
            x, y = take(2)
            pos = (pos[0] + x, pos[1] + y) if rel else (x, y)
            cur.append(pos)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c == "H":
            (x,) = take(1)
            pos = (pos[0] + x if rel else x, pos[1])
            cur.append(pos)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c == "V":
            (y,) = take(1)
            pos = (pos[0], pos[1] + y if rel else y)
            cur.append(pos)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c in ("C", "S"):
            if c == "C":
                x1, y1, x2, y2, x, y = take(6)
            else:
                x2, y2, x, y = take(4)
                if prev_cubic_ctrl is not None:
                    x1, y1 = (
                        2 * pos[0] - prev_cubic_ctrl[0],
                        2 * pos[1] - prev_cubic_ctrl[1],
                    )
                else:
                    x1, y1 = pos
                if rel:
                    x1, y1 = x1 - pos[0], y1 - pos[1]
            if rel:
                x1, y1 = pos[0] + x1, pos[1] + y1
                x2, y2 = pos[0] + x2, pos[1] + y2
                x, y = pos[0] + x, pos[1] + y
            flatten_cubic(pos, (x1, y1), (x2, y2), (x, y), tol, cur)
            prev_cubic_ctrl = (x2, y2)
            prev_quad_ctrl = None
            pos = (x, y)
        elif c in ("Q", "T"):
            if c == "Q":
                x1, y1, x, y = take(4)
                if rel:
                    x1, y1 = pos[0] + x1, pos[1] + y1
            else:
                x, y = take(2)
                if prev_quad_ctrl is not None:
                    x1, y1 = (
                        2 * pos[0] - prev_quad_ctrl[0],
                        2 * pos[1] - prev_quad_ctrl[1],
                    )
                else:
                    x1, y1 = pos
            if rel:
                x, y = pos[0] + x, pos[1] + y
            flatten_quadratic(pos, (x1, y1), (x, y), tol, cur)
            prev_quad_ctrl = (x1, y1)
            prev_cubic_ctrl = None
            pos = (x, y)
        elif c == "A":
            rx, ry, rot, laf, sf, x, y = take(7)
            if rel:
                x, y = pos[0] + x, pos[1] + y
            flatten_arc(pos, rx, ry, rot, bool(laf), bool(sf), (x, y), tol, cur)
            prev_cubic_ctrl = prev_quad_ctrl = None
            pos = (x, y)
        else:
            i += 1
    if cur:
        polylines.append(cur)
    return [p for p in polylines if len(p) >= 2 or len(p) == 1]


def ellipse_outline(cx, cy, rx, ry, tol=DEFAULT_FLATTEN_TOL) -> list[tuple]:
    r = max(abs(rx), abs(ry))
    if r <= 0:
        return [(cx, cy)]
    if r > tol:
        step = 2.0 * math.acos(max(-1.0, 1.0 - tol / r))
        n = max(8, int(math.ceil(2 * math.pi / step)))
    else:
        n = 8
    pts = [
        (cx + rx * math.cos(2 * math.pi * i / n), cy + ry * math.sin(2 * math.pi * i / n))
        for i in range(n)
    ]
    pts.append(pts[0])
    return pts


def rect_outline(x, y, w, h) -> list[tuple]:
    return [(x, y), (x + w, y), (x + w, y + h), (x, y + h), (x, y)]
