import { captureSpatialInput, EmptyGesture } from '../geometry.js';
import type { Gesture, Point, Scheme } from '../types.js';

export interface CanvasCallbacks {
  onScheme: (scheme: Scheme) => void;
  onError: (err: unknown) => void;
}

/** Preview panel: hosts the live SVG and captures spatial coordination
 * gestures (click / line / freehand) in screen space. */
export class CanvasPanel {
  private gesture: Gesture | null = null;
  private points: Point[] = [];
  private svgRoot: SVGSVGElement | null = null;
  private elementsInOrder: SVGGraphicsElement[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly callbacks: CanvasCallbacks
  ) {
    root.addEventListener('pointerdown', (ev) => this.onDown(ev));
    root.addEventListener('pointermove', (ev) => this.onMove(ev));
    root.addEventListener('pointerup', () => this.onUp());
  }

  loadDocument(svgText: string): void {
    this.root.innerHTML = svgText;
    this.svgRoot = this.root.querySelector('svg');
    // engine element indices count renderable elements in document order,
    // skipping definition/metadata containers
    this.elementsInOrder = [];
    if (this.svgRoot) {
      const skip = new Set(['defs', 'metadata', 'style', 'title', 'desc',
        'linearGradient', 'radialGradient', 'pattern', 'filter', 'symbol',
        'clipPath', 'mask', 'marker']);
      const walk = (el: Element) => {
        for (const child of Array.from(el.children)) {
          const tag = child.tagName.replace(/^.*:/, '');
          if (skip.has(tag)) continue;
          this.elementsInOrder.push(child as SVGGraphicsElement);
          walk(child);
        }
      };
      walk(this.svgRoot);
    }
  }

  get svg(): SVGSVGElement | null {
    return this.svgRoot;
  }

  /** Element lookup by engine index, for applying frame snapshots. */
  elementAt(index: number): SVGGraphicsElement | null {
    return this.elementsInOrder[index] ?? null;
  }

  /** Arm the canvas for one gesture; the next pointer interaction resolves
   * to a coordination scheme. */
  beginGesture(kind: Gesture): void {
    this.gesture = kind;
    this.points = [];
    this.root.classList.add('capturing');
  }

  cancelGesture(): void {
    this.gesture = null;
    this.points = [];
    this.root.classList.remove('capturing');
  }

  private onDown(ev: PointerEvent): void {
    if (!this.gesture) return;
    this.points = [{ x: ev.clientX, y: ev.clientY }];
  }

  private onMove(ev: PointerEvent): void {
    if (!this.gesture || this.points.length === 0) return;
    if (this.gesture !== 'click') this.points.push({ x: ev.clientX, y: ev.clientY });
  }

  private onUp(): void {
    if (!this.gesture) return;
    const kind = this.gesture;
    const rect = this.root.getBoundingClientRect();
    try {
      const scheme = captureSpatialInput(kind, this.points, rect);
      this.callbacks.onScheme(scheme);
    } catch (err) {
      if (!(err instanceof EmptyGesture)) this.callbacks.onError(err);
    } finally {
      this.cancelGesture();
    }
  }
}
