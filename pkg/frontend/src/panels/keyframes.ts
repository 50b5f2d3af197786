import type { GroupClipJson, VersionJson } from '../types.js';

/** Read-oriented keyframe table for the selected track: one row per
 * property keyframe with offset, value, and per-segment easing. */
export class KeyframePanel {
  constructor(private readonly root: HTMLElement) {}

  setVersion(version: VersionJson | null, track: number): void {
    this.root.textContent = '';
    const gc: GroupClipJson | undefined = version?.clips[track];
    if (!gc) return;
    const title = document.createElement('div');
    title.className = 'keyframe-title';
    title.textContent = `${gc.clip.title}${gc.clip.loop ? ' (loop)' : ''}`;
    this.root.append(title);
    const table = document.createElement('table');
    table.className = 'keyframe-table';
    const head = table.insertRow();
    for (const h of ['property', 'offset', 'value', 'easing']) {
      const th = document.createElement('th');
      th.textContent = h;
      head.append(th);
    }
    for (const t of gc.clip.tracks) {
      for (const k of t.keyframes) {
        const row = table.insertRow();
        row.insertCell().textContent = t.property;
        row.insertCell().textContent = String(k.offset);
        row.insertCell().textContent = String(k.value);
        row.insertCell().textContent = k.easing ?? 'linear';
      }
    }
    this.root.append(table);
  }
}
