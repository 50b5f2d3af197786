import type { EngineClient } from '../api.js';
import type { Scheme, VersionJson } from '../types.js';

export interface CoordinationCallbacks {
  onVersionChanged: (version: VersionJson) => void;
  /** Ask the canvas to capture a click / line / freehand gesture. */
  requestGesture: (kind: 'click' | 'line' | 'freehand') => void;
  onError: (err: unknown) => void;
}

/** Group coordination panel: pick a scheme for the selected track; the
 * spatial modes delegate point capture to the canvas. */
export class CoordinationPanel {
  private version: VersionJson | null = null;
  private track = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: EngineClient,
    private readonly session: () => string,
    private readonly callbacks: CoordinationCallbacks
  ) {}

  setVersion(version: VersionJson, track: number): void {
    this.version = version;
    this.track = track;
    this.render();
  }

  /** Called by the canvas once a spatial gesture resolves to a scheme. */
  async submitScheme(scheme: Scheme): Promise<void> {
    if (!this.version) return;
    try {
      const updated = await this.client.setCoordination(
        this.session(),
        this.version.id,
        this.track,
        scheme
      );
      this.setVersion(updated, this.track);
      this.callbacks.onVersionChanged(updated);
    } catch (err) {
      this.callbacks.onError(err);
    }
  }

  private render(): void {
    this.root.textContent = '';
    if (!this.version) return;
    const gc = this.version.clips[this.track];
    if (!gc) return;
    const current = document.createElement('div');
    current.className = 'coord-current';
    current.textContent = `Track ${this.track} (${gc.clip.selector}): ${gc.coordination.mode}`;
    this.root.append(current);

    const add = (label: string, onClick: () => void) => {
      const btn = document.createElement('button');
      btn.textContent = label;
      btn.addEventListener('click', onClick);
      this.root.append(btn);
    };
    add('Data order', () =>
      void this.submitScheme({ mode: 'data', direction: 'ascending', basis: 'rank' })
    );
    add('Layer order', () =>
      void this.submitScheme({ mode: 'layer', direction: 'ascending' })
    );
    add('Random', () =>
      void this.submitScheme({ mode: 'random', seed: (Math.random() * 2 ** 31) | 0 })
    );
    add('Radius (click on canvas)', () => this.callbacks.requestGesture('click'));
    add('Projection (drag a line)', () => this.callbacks.requestGesture('line'));
    add('Sketch (freehand)', () => this.callbacks.requestGesture('freehand'));
  }
}
