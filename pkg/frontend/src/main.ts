import { EngineClient } from './api.js';
import { CanvasPanel } from './panels/canvas.js';
import { ChatPanel } from './panels/chat.js';
import { CoordinationPanel } from './panels/coordination.js';
import { KeyframePanel } from './panels/keyframes.js';
import { TimelinePanel } from './panels/timeline.js';
import { applySnapshotToDom, PlaybackLoop } from './playback.js';
import type { VersionJson, ViewState } from './types.js';

function panel(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing panel #${id}`);
  return el;
}

function showError(err: unknown): void {
  const bar = panel('status');
  bar.textContent = err instanceof Error ? err.message : String(err);
  bar.classList.add('error');
  setTimeout(() => bar.classList.remove('error'), 4000);
}

async function boot(): Promise<void> {
  const client = new EngineClient('');
  const state: ViewState = {
    sessionId: null,
    activeVersion: null,
    playhead: 0,
    playing: false,
    pendingSketch: null,
    selectedTrack: null,
  };
  let loop: PlaybackLoop | null = null;

  const canvas = new CanvasPanel(panel('canvas'), {
    onScheme: (scheme) => void coordination.submitScheme(scheme),
    onError: showError,
  });
  const keyframes = new KeyframePanel(panel('keyframes'));

  async function activateVersion(version: VersionJson): Promise<void> {
    if (!state.sessionId) return;
    state.activeVersion = version.id;
    state.selectedTrack = 0;
    timeline.setVersion(version);
    coordination.setVersion(version, 0);
    keyframes.setVersion(version, 0);
    const total = await client.totalDuration(state.sessionId, version.id);
    loop = new PlaybackLoop({
      client,
      sessionId: state.sessionId,
      versionId: version.id,
      totalDuration: total,
      apply: (snap) => applySnapshotToDom(snap, (i) => canvas.elementAt(i)),
      onError: showError,
    });
    const frame = () => {
      void loop?.tick();
      requestAnimationFrame(frame);
    };
    requestAnimationFrame(frame);
  }

  const session = () => state.sessionId ?? '';

  const coordination = new CoordinationPanel(panel('coordination'), client, session, {
    onVersionChanged: (v) => {
      timeline.setVersion(v);
      keyframes.setVersion(v, state.selectedTrack ?? 0);
    },
    requestGesture: (kind) => canvas.beginGesture(kind),
    onError: showError,
  });

  const timeline = new TimelinePanel(panel('timeline'), client, session, {
    onVersionChanged: (v) => {
      coordination.setVersion(v, state.selectedTrack ?? 0);
      keyframes.setVersion(v, state.selectedTrack ?? 0);
    },
    onSelectTrack: (ordinal) => {
      state.selectedTrack = ordinal;
      keyframes.setVersion(null, ordinal);
    },
    onScrub: (t) => {
      state.playhead = t;
      void loop?.scrub(t);
    },
  });

  panel('play').addEventListener('click', () => loop?.play());
  panel('pause').addEventListener('click', () => loop?.pause());
  panel('export').addEventListener('click', () => {
    if (!state.sessionId || state.activeVersion === null) return;
    void client
      .exportVersion(state.sessionId, state.activeVersion, 'script')
      .then((script) => {
        const url = URL.createObjectURL(new Blob([script], { type: 'text/javascript' }));
        window.open(url, '_blank');
      })
      .catch(showError);
  });

  const fileInput = panel('svg-file') as HTMLInputElement;
  fileInput.addEventListener('change', () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    void file.text().then(async (svgText) => {
      try {
        state.sessionId = await client.createSession(svgText);
        canvas.loadDocument(await client.document(state.sessionId));
      } catch (err) {
        showError(err);
      }
    });
  });

  new ChatPanel(panel('chat'), client, session, {
    onVersionCreated: (v) => void activateVersion(v),
    onError: showError,
  });
}

void boot();
