import type { EngineClient } from '../api.js';
import type { GroupClipJson, VersionJson } from '../types.js';

/** px-per-ms scale; block layout is a pure function of (delay, duration, zoom). */
export function blockGeometry(
  delayMs: number,
  durationMs: number,
  zoom: number
): { x: number; width: number } {
  return { x: delayMs * zoom, width: durationMs * zoom };
}

export function timingFromBlock(
  x: number,
  width: number,
  zoom: number
): { delay: number; duration: number } {
  return { delay: Math.max(0, x / zoom), duration: Math.max(1, width / zoom) };
}

export interface TimelineCallbacks {
  onVersionChanged: (version: VersionJson) => void;
  onSelectTrack: (ordinal: number) => void;
  onScrub: (t: number) => void;
}

export class TimelinePanel {
  zoom = 0.2; // px per ms
  private version: VersionJson | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: EngineClient,
    private readonly session: () => string,
    private readonly callbacks: TimelineCallbacks
  ) {}

  setVersion(version: VersionJson): void {
    this.version = version;
    this.render();
  }

  /** Commit a drag: convert the dropped block position back to timing and
   * push it through the API; the response re-renders the block. */
  async commitDrag(ordinal: number, x: number, width: number): Promise<void> {
    if (!this.version) return;
    const { delay, duration } = timingFromBlock(x, width, this.zoom);
    const updated = await this.client.setTiming(this.session(), this.version.id, ordinal, {
      delay,
      duration,
    });
    this.setVersion(updated);
    this.callbacks.onVersionChanged(updated);
  }

  private render(): void {
    this.root.textContent = '';
    if (!this.version) return;
    this.version.clips.forEach((gc: GroupClipJson, ordinal: number) => {
      const row = document.createElement('div');
      row.className = 'timeline-row';
      const label = document.createElement('span');
      label.className = 'timeline-label';
      label.textContent = `${gc.clip.selector} · ${gc.clip.title}`;
      const block = document.createElement('div');
      block.className = 'timeline-block';
      const geo = blockGeometry(gc.delay, gc.duration, this.zoom);
      block.style.left = `${geo.x}px`;
      block.style.width = `${geo.width}px`;
      block.title = `delay ${gc.delay} ms · duration ${gc.duration} ms · offset ${gc.offset} ms`;
      block.addEventListener('pointerdown', (ev) => this.startDrag(ev, ordinal, block));
      row.addEventListener('click', () => this.callbacks.onSelectTrack(ordinal));
      row.append(label, block);
      this.root.append(row);
    });
    const ruler = document.createElement('input');
    ruler.type = 'range';
    ruler.min = '0';
    ruler.max = '3000';
    ruler.className = 'timeline-scrub';
    ruler.addEventListener('input', () => this.callbacks.onScrub(Number(ruler.value)));
    this.root.append(ruler);
  }

  private startDrag(ev: PointerEvent, ordinal: number, block: HTMLElement): void {
    ev.preventDefault();
    const startX = ev.clientX;
    const origin = parseFloat(block.style.left || '0');
    const width = parseFloat(block.style.width || '0');
    const move = (e: PointerEvent) => {
      block.style.left = `${Math.max(0, origin + e.clientX - startX)}px`;
    };
    const up = () => {
      window.removeEventListener('pointermove', move);
      window.removeEventListener('pointerup', up);
      void this.commitDrag(ordinal, parseFloat(block.style.left || '0'), width);
    };
    window.addEventListener('pointermove', move);
    window.addEventListener('pointerup', up);
  }
}
