import type { EngineClient } from '../api.js';
import type { HistoryEntryJson, VersionJson } from '../types.js';

export interface ChatCallbacks {
  onVersionCreated: (version: VersionJson) => void;
  onError: (err: unknown) => void;
}

/** Conversation panel: prompt input, transcript, and version cards with
 * inline advisory banners. */
export class ChatPanel {
  private readonly log: HTMLElement;
  private readonly input: HTMLTextAreaElement;
  private baseVersions: number[] = [];

  constructor(
    root: HTMLElement,
    private readonly client: EngineClient,
    private readonly session: () => string,
    private readonly callbacks: ChatCallbacks
  ) {
    this.log = document.createElement('div');
    this.log.className = 'chat-log';
    this.input = document.createElement('textarea');
    this.input.className = 'chat-input';
    this.input.placeholder = 'Describe the animation you want…';
    const send = document.createElement('button');
    send.textContent = 'Send';
    send.addEventListener('click', () => void this.send());
    this.input.addEventListener('keydown', (ev) => {
      if (ev.key === 'Enter' && !ev.shiftKey) {
        ev.preventDefault();
        void this.send();
      }
    });
    root.append(this.log, this.input, send);
  }

  referenceVersion(id: number): void {
    if (!this.baseVersions.includes(id)) this.baseVersions.push(id);
  }

  async send(): Promise<void> {
    const text = this.input.value.trim();
    if (!text) return;
    this.appendEntry({ role: 'user', text });
    this.input.value = '';
    const bases = this.baseVersions;
    this.baseVersions = [];
    try {
      const { entry, version } = await this.client.postMessage(this.session(), text, bases);
      this.appendEntry(entry);
      if (version) {
        this.appendVersionCard(version);
        this.callbacks.onVersionCreated(version);
      }
    } catch (err) {
      this.callbacks.onError(err);
    }
  }

  private appendEntry(entry: Pick<HistoryEntryJson, 'role' | 'text'>): void {
    const div = document.createElement('div');
    div.className = `chat-entry chat-${entry.role}`;
    div.textContent = entry.text;
    this.log.append(div);
    this.log.scrollTop = this.log.scrollHeight;
  }

  private appendVersionCard(version: VersionJson): void {
    const card = document.createElement('div');
    card.className = 'version-card';
    card.textContent = `Version ${version.id} — ${version.clips.length} clip(s)`;
    for (const w of version.warnings) {
      const banner = document.createElement('div');
      banner.className = 'warning-banner';
      banner.textContent = `⚠ ${w.rationale}`;
      card.append(banner);
    }
    const use = document.createElement('button');
    use.textContent = 'Iterate on this';
    use.addEventListener('click', () => this.referenceVersion(version.id));
    card.append(use);
    this.log.append(card);
  }
}
