import type {
  HistoryEntryJson,
  Scheme,
  SnapshotJson,
  VersionJson,
} from './types.js';

export interface ApiError {
  code: string;
  message: string;
  detail: string | null;
}

export class EngineError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail: string | null;

  constructor(status: number, body: ApiError) {
    super(body.message);
    this.name = 'EngineError';
    this.code = body.code;
    this.status = status;
    this.detail = body.detail;
  }
}

async function raise(resp: Response): Promise<never> {
  let body: ApiError = { code: 'Unknown', message: resp.statusText, detail: null };
  try {
    body = (await resp.json()) as ApiError;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new EngineError(resp.status, body);
}

/** Thin typed client over the engine's HTTP API — the UI's only data source. */
export class EngineClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, '') + path;
  }

  async createSession(
    svg: string,
    styles?: string,
    manifest?: unknown
  ): Promise<string> {
    const form = new FormData();
    form.append('svg', new Blob([svg], { type: 'image/svg+xml' }), 'document.svg');
    if (styles !== undefined) {
      form.append('styles', new Blob([styles], { type: 'text/css' }), 'styles.css');
    }
    if (manifest !== undefined) {
      form.append(
        'manifest',
        new Blob([JSON.stringify(manifest)], { type: 'application/json' }),
        'manifest.json'
      );
    }
    const resp = await fetch(this.url('/sessions'), { method: 'POST', body: form });
    if (!resp.ok) await raise(resp);
    const data = (await resp.json()) as { session_id: string };
    return data.session_id;
  }

  async postMessage(
    sessionId: string,
    text: string,
    baseVersions: number[] = []
  ): Promise<{ entry: HistoryEntryJson; version: VersionJson | null }> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/messages`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ text, base_versions: baseVersions }),
    });
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as { entry: HistoryEntryJson; version: VersionJson | null };
  }

  async listVersions(
    sessionId: string
  ): Promise<{ versions: VersionJson[]; active_version: number | null }> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/versions`));
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as { versions: VersionJson[]; active_version: number | null };
  }

  async getVersion(sessionId: string, versionId: number): Promise<VersionJson> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/versions/${versionId}`));
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as VersionJson;
  }

  async setCoordination(
    sessionId: string,
    versionId: number,
    track: number,
    scheme: Scheme
  ): Promise<VersionJson> {
    const resp = await fetch(
      this.url(`/sessions/${sessionId}/versions/${versionId}/tracks/${track}/coordination`),
      {
        method: 'PUT',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ scheme }),
      }
    );
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as VersionJson;
  }

  async setTiming(
    sessionId: string,
    versionId: number,
    track: number,
    timing: { delay: number; duration: number; offset?: number }
  ): Promise<VersionJson> {
    const resp = await fetch(
      this.url(`/sessions/${sessionId}/versions/${versionId}/tracks/${track}/timing`),
      {
        method: 'PUT',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(timing),
      }
    );
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as VersionJson;
  }

  /** Raw canonical bytes of the frame snapshot — kept verbatim so the UI can
   * guarantee what it renders is exactly what the engine sampled. */
  async previewRaw(sessionId: string, versionId: number, t: number): Promise<string> {
    const resp = await fetch(
      this.url(`/sessions/${sessionId}/versions/${versionId}/preview?t=${t}`)
    );
    if (!resp.ok) await raise(resp);
    return await resp.text();
  }

  async preview(sessionId: string, versionId: number, t: number): Promise<SnapshotJson> {
    return JSON.parse(await this.previewRaw(sessionId, versionId, t)) as SnapshotJson;
  }

  async exportVersion(
    sessionId: string,
    versionId: number,
    flavor: 'program' | 'script' | 'baked'
  ): Promise<string> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/versions/${versionId}/export`), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ flavor }),
    });
    if (!resp.ok) await raise(resp);
    return await resp.text();
  }

  async document(sessionId: string): Promise<string> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/document`));
    if (!resp.ok) await raise(resp);
    return await resp.text();
  }

  async totalDuration(sessionId: string, versionId: number): Promise<number> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/versions/${versionId}/duration`));
    if (!resp.ok) await raise(resp);
    const data = (await resp.json()) as { total_duration: number };
    return data.total_duration;
  }
}
