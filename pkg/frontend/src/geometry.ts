import type { Gesture, Point, Scheme } from './types.js';

export class EmptyGesture extends Error {
  constructor() {
    super('gesture contains no points');
    this.name = 'EmptyGesture';
  }
}

export interface CanvasRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Map a screen-space point to viewBox-relative [0,1]² coordinates. */
export function screenToRelative(p: Point, rect: CanvasRect): [number, number] {
  return [(p.x - rect.left) / rect.width, (p.y - rect.top) / rect.height];
}

function perpendicularDistance(p: Point, a: Point, b: Point): number {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const len2 = dx * dx + dy * dy;
  if (len2 === 0) return Math.hypot(p.x - a.x, p.y - a.y);
  const t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  const u = Math.max(0, Math.min(1, t));
  return Math.hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

/** Classic Douglas–Peucker simplification (endpoints always kept). */
export function douglasPeucker(points: Point[], tolerance: number): Point[] {
  if (points.length <= 2) return points.slice();
  const first = points[0]!;
  const last = points[points.length - 1]!;
  let maxDist = -1;
  let maxIdx = 0;
  for (let i = 1; i < points.length - 1; i++) {
    const d = perpendicularDistance(points[i]!, first, last);
    if (d > maxDist) {
      maxDist = d;
      maxIdx = i;
    }
  }
  if (maxDist <= tolerance) return [first, last];
  const left = douglasPeucker(points.slice(0, maxIdx + 1), tolerance);
  const right = douglasPeucker(points.slice(maxIdx), tolerance);
  return left.slice(0, -1).concat(right);
}

/**
 * Simplify a freehand stroke for submission: Douglas–Peucker at the given
 * pixel tolerance, escalating the tolerance until the budget is met.
 */
export function simplifyFreehand(
  points: Point[],
  tolerancePx = 2,
  maxPoints = 64
): Point[] {
  let tol = tolerancePx;
  let out = douglasPeucker(points, tol);
  while (out.length > maxPoints) {
    tol *= 1.5;
    out = douglasPeucker(points, tol);
  }
  return out;
}

/**
 * Turn a raw gesture into viewBox-relative coordination parameters.
 * click → radius center; line → projection endpoints; freehand → simplified
 * sketch polyline (≤ 64 points at 2 px tolerance).
 */
export function captureSpatialInput(
  gesture: Gesture,
  screenPoints: Point[],
  rect: CanvasRect
): Scheme {
  if (screenPoints.length === 0) throw new EmptyGesture();
  if (gesture === 'click') {
    return { mode: 'layout-radius', center: screenToRelative(screenPoints[0]!, rect) };
  }
  if (gesture === 'line') {
    if (screenPoints.length < 2) throw new EmptyGesture();
    return {
      mode: 'layout-projection',
      start: screenToRelative(screenPoints[0]!, rect),
      end: screenToRelative(screenPoints[screenPoints.length - 1]!, rect),
    };
  }
  if (screenPoints.length < 2) throw new EmptyGesture();
  const simplified = simplifyFreehand(screenPoints);
  return {
    mode: 'layout-sketch',
    polyline: simplified.map((p) => screenToRelative(p, rect)),
  };
}
