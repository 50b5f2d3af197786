import { spawn, type ChildProcess } from 'node:child_process';
import { mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { EngineClient } from '../src/api.js';
import { captureSpatialInput } from '../src/geometry.js';
import { blockGeometry, timingFromBlock } from '../src/panels/timeline.js';
import { PlaybackLoop } from '../src/playback.js';
import type { SnapshotJson } from '../src/types.js';

const PORT = 8750 + (process.pid % 200);
const BASE = `http://127.0.0.1:${PORT}`;
const SVG_PATH = join(__dirname, '..', '..', 'tests', 'fixtures', 'flower_chart.svg');
const GROW_PROMPT = 'Please make the flowers grow up';

let server: ChildProcess;

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'studio-ui-'));
  const launcher = [
    'import uvicorn',
    'from sway.api import create_app',
    'from sway.session import SessionStore',
    `uvicorn.run(create_app(SessionStore(${JSON.stringify(dataDir)})), host="127.0.0.1", port=${PORT}, log_level="warning")`,
  ].join('; ');
  server = spawn('python3', ['-c', launcher], { stdio: ['ignore', 'pipe', 'pipe'] });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const resp = await fetch(`${BASE}/openapi.json`);
      if (resp.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error('engine server did not start');
    await new Promise((r) => setTimeout(r, 150));
  }
}, 40_000);

afterAll(() => {
  server?.kill();
});

describe('end-to-end against the engine API', () => {
  const client = new EngineClient(BASE);
  const canvasRect = { left: 0, top: 0, width: 400, height: 200 };

  it('runs the full authoring flow and exports a script embedding the program', async () => {
    const svg = readFileSync(SVG_PATH, 'utf-8');
    const sessionId = await client.createSession(svg);
    expect(sessionId).toBeTruthy();

    // prompt → version 1 (offline stub reply)
    const { version } = await client.postMessage(sessionId, GROW_PROMPT);
    expect(version?.id).toBe(1);
    expect(version!.clips.map((gc) => gc.clip.selector)).toEqual(['.flower', '.petal']);

    // radius click at the canvas center
    const scheme = captureSpatialInput('click', [{ x: 200, y: 100 }], canvasRect);
    const updated = await client.setCoordination(sessionId, 1, 0, scheme);
    expect(updated.clips[0]!.coordination).toEqual({
      mode: 'layout-radius',
      center: [0.5, 0.5],
    });

    // drag the first timeline block 30 px to the right at zoom 0.2
    const zoom = 0.2;
    const geo = blockGeometry(updated.clips[0]!.delay, updated.clips[0]!.duration, zoom);
    const timing = timingFromBlock(geo.x + 30, geo.width, zoom);
    const dragged = await client.setTiming(sessionId, 1, 0, timing);
    expect(dragged.clips[0]!.delay).toBeCloseTo(150, 6);
    const rerendered = blockGeometry(dragged.clips[0]!.delay, dragged.clips[0]!.duration, zoom);
    expect(Math.abs(rerendered.x - (geo.x + 30))).toBeLessThanOrEqual(1);

    // export: the script byte-embeds the canonical program
    const program = await client.exportVersion(sessionId, 1, 'program');
    const script = await client.exportVersion(sessionId, 1, 'script');
    expect(JSON.parse(program).format_version).toBe('1.0.0');
    expect(script.includes(program)).toBe(true);
  }, 30_000);

  it('paused preview frames are byte-equal to direct preview fetches', async () => {
    const svg = readFileSync(SVG_PATH, 'utf-8');
    const sessionId = await client.createSession(svg);
    await client.postMessage(sessionId, GROW_PROMPT);
    const total = await client.totalDuration(sessionId, 1);
    expect(total).toBeGreaterThan(0);

    const applied: SnapshotJson[] = [];
    const loop = new PlaybackLoop({
      client,
      sessionId,
      versionId: 1,
      totalDuration: total,
      apply: (snap) => applied.push(snap),
    });

    let seed = 4242;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) & 0x7fffffff;
      return seed / 0x7fffffff;
    };
    for (let i = 0; i < 10; i++) {
      const t = Math.round(rand() * total * 100) / 100;
      await loop.scrub(t);
      const direct = await fetch(
        `${BASE}/sessions/${sessionId}/versions/1/preview?t=${t}`
      ).then((r) => r.text());
      expect(loop.lastRaw).toBe(direct);
    }
    expect(applied.length).toBe(10);
  }, 30_000);

  it('submits a simplified freehand sketch the engine accepts', async () => {
    const svg = readFileSync(SVG_PATH, 'utf-8');
    const sessionId = await client.createSession(svg);
    await client.postMessage(sessionId, GROW_PROMPT);

    const points = Array.from({ length: 500 }, (_, i) => ({
      x: 10 + (i * 380) / 500,
      y: 100 + 60 * Math.sin(i / 25),
    }));
    const scheme = captureSpatialInput('freehand', points, canvasRect);
    if (scheme.mode !== 'layout-sketch') throw new Error('wrong mode');
    expect(scheme.polyline.length).toBeLessThanOrEqual(64);
    const updated = await client.setCoordination(sessionId, 1, 1, scheme);
    expect(updated.clips[1]!.coordination.mode).toBe('layout-sketch');
  }, 30_000);

  it('surfaces engine errors with their code', async () => {
    await expect(client.postMessage('does-not-exist', 'hi')).rejects.toMatchObject({
      name: 'EngineError',
      code: 'UnknownSession',
      status: 404,
    });
  });
});
