import type { EngineClient } from './api.js';
import type { SnapshotJson } from './types.js';

export interface PlaybackOptions {
  client: EngineClient;
  sessionId: string;
  versionId: number;
  totalDuration: number;
  /** Called with every accepted snapshot (stale responses are discarded). */
  apply: (snapshot: SnapshotJson) => void;
  onError?: (err: unknown) => void;
  now?: () => number;
  /** Frame fetch cadence; fidelity over smoothness, so no client-side
   * interpolation between snapshots. */
  fetchHz?: number;
}

/**
 * Drives the preview: advances the playhead in wall-clock time, fetches
 * engine snapshots, and applies them. The loop holds no animation math of
 * its own — every displayed frame is byte-for-byte an engine response.
 */
export class PlaybackLoop {
  playhead = 0;
  playing = false;

  private readonly opts: PlaybackOptions;
  private readonly now: () => number;
  private readonly interval: number;
  private playStartWall = 0;
  private playStartHead = 0;
  private seq = 0;
  private applied = -1;
  private lastFetch = -Infinity;
  private rawByT = new Map<number, string>();
  /** Canonical bytes of the most recently applied snapshot. */
  lastRaw: string | null = null;

  constructor(opts: PlaybackOptions) {
    this.opts = opts;
    this.now = opts.now ?? (() => performance.now());
    this.interval = 1000 / (opts.fetchHz ?? 30);
  }

  play(): void {
    if (this.playing) return;
    this.playing = true;
    this.playStartWall = this.now();
    this.playStartHead = this.playhead;
  }

  pause(): void {
    if (!this.playing) return;
    this.playhead = this.currentTime();
    this.playing = false;
  }

  /** Jump the playhead; fetches the exact frame immediately. */
  async scrub(t: number): Promise<void> {
    this.playing = false;
    this.playhead = Math.max(0, Math.min(t, this.opts.totalDuration));
    await this.fetchFrame(this.playhead);
  }

  currentTime(): number {
    if (!this.playing) return this.playhead;
    const t = this.playStartHead + (this.now() - this.playStartWall);
    return Math.min(t, this.opts.totalDuration);
  }

  /** One step of the render loop; call from requestAnimationFrame. */
  async tick(): Promise<void> {
    if (!this.playing) return;
    const wall = this.now();
    if (wall - this.lastFetch < this.interval) return;
    this.lastFetch = wall;
    const t = this.currentTime();
    await this.fetchFrame(t);
    if (t >= this.opts.totalDuration) this.pause();
  }

  private async fetchFrame(t: number): Promise<void> {
    const mySeq = ++this.seq;
    try {
      let raw = this.rawByT.get(t);
      if (raw === undefined) {
        raw = await this.opts.client.previewRaw(
          this.opts.sessionId,
          this.opts.versionId,
          t
        );
        if (this.rawByT.size > 256) this.rawByT.clear();
        this.rawByT.set(t, raw);
      }
      if (mySeq <= this.applied) return; // an older request resolved late
      this.applied = mySeq;
      this.lastRaw = raw;
      this.opts.apply(JSON.parse(raw) as SnapshotJson);
    } catch (err) {
      this.opts.onError?.(err);
    }
  }
}

/** Apply a snapshot to live SVG elements, matching the engine's rendering:
 * transform order translate → rotate(about pivot) → scale(about pivot). */
export function applySnapshotToDom(
  snapshot: SnapshotJson,
  elementAt: (index: number) => SVGGraphicsElement | null
): void {
  for (const [key, props] of Object.entries(snapshot.values)) {
    const el = elementAt(Number(key));
    if (!el) continue;
    if (props['opacity'] !== undefined) {
      el.setAttribute('opacity', String(props['opacity']));
    }
    if (props['fill-color'] !== undefined) {
      el.setAttribute('fill', String(props['fill-color']));
    }
    if (props['stroke-color'] !== undefined) {
      el.setAttribute('stroke', String(props['stroke-color']));
    }
    if (props['stroke-width'] !== undefined) {
      el.setAttribute('stroke-width', String(props['stroke-width']));
    }
    if (props['filter-blur'] !== undefined) {
      el.style.filter = `blur(${props['filter-blur']}px)`;
    }
    const tx = Number(props['translateX'] ?? 0);
    const ty = Number(props['translateY'] ?? 0);
    const rot = Number(props['rotate'] ?? 0);
    const scale = Number(props['scale'] ?? 1);
    const parts: string[] = [];
    if (tx !== 0 || ty !== 0) parts.push(`translate(${tx} ${ty})`);
    if (rot !== 0 || scale !== 1) {
      const box = el.getBBox();
      const cx = box.x + box.width / 2;
      const cy = box.y + box.height / 2;
      if (rot !== 0) parts.push(`rotate(${rot} ${cx} ${cy})`);
      if (scale !== 1) {
        parts.push(`translate(${cx} ${cy}) scale(${scale}) translate(${-cx} ${-cy})`);
      }
    }
    const base = el.dataset['baseTransform'] ?? el.getAttribute('transform') ?? '';
    if (el.dataset['baseTransform'] === undefined) el.dataset['baseTransform'] = base;
    const suffix = parts.join(' ');
    const combined = (base + ' ' + suffix).trim();
    if (combined) el.setAttribute('transform', combined);
    else el.removeAttribute('transform');
  }
}
