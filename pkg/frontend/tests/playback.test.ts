import { describe, expect, it } from 'vitest';

import type { EngineClient } from '../src/api.js';
import { PlaybackLoop } from '../src/playback.js';
import type { SnapshotJson } from '../src/types.js';

function fakeClient(delayMs = 0): { client: EngineClient; calls: number[] } {
  const calls: number[] = [];
  const client = {
    previewRaw: async (_s: string, _v: number, t: number) => {
      calls.push(t);
      if (delayMs) await new Promise((r) => setTimeout(r, delayMs));
      return JSON.stringify({ time: t, values: {} });
    },
  } as unknown as EngineClient;
  return { client, calls };
}

function makeLoop(client: EngineClient, applied: SnapshotJson[], now: () => number) {
  return new PlaybackLoop({
    client,
    sessionId: 's',
    versionId: 1,
    totalDuration: 1500,
    apply: (snap) => applied.push(snap),
    now,
  });
}

describe('PlaybackLoop', () => {
  it('scrub fetches the exact frame and pauses', async () => {
    const { client, calls } = fakeClient();
    const applied: SnapshotJson[] = [];
    const loop = makeLoop(client, applied, () => 0);
    loop.play();
    await loop.scrub(420);
    expect(loop.playing).toBe(false);
    expect(loop.playhead).toBe(420);
    expect(calls).toEqual([420]);
    expect(applied.at(-1)?.time).toBe(420);
    expect(loop.lastRaw).toBe(JSON.stringify({ time: 420, values: {} }));
  });

  it('clamps scrub to the timeline', async () => {
    const { client } = fakeClient();
    const loop = makeLoop(client, [], () => 0);
    await loop.scrub(99999);
    expect(loop.playhead).toBe(1500);
    await loop.scrub(-50);
    expect(loop.playhead).toBe(0);
  });

  it('advances the playhead in wall-clock time while playing', async () => {
    let wall = 1000;
    const { client, calls } = fakeClient();
    const loop = makeLoop(client, [], () => wall);
    loop.play();
    wall = 1200;
    await loop.tick();
    expect(calls).toEqual([200]);
    wall = 1350;
    loop.pause();
    expect(loop.playhead).toBe(350);
    wall = 9999;
    expect(loop.currentTime()).toBe(350); // pause freezes the playhead
  });

  it('throttles fetches to the configured cadence', async () => {
    let wall = 0;
    const { client, calls } = fakeClient();
    const loop = makeLoop(client, [], () => wall);
    loop.play();
    for (let i = 0; i < 10; i++) {
      wall += 10; // 100 Hz of ticks against a ~30 Hz budget
      await loop.tick();
    }
    expect(calls.length).toBeLessThanOrEqual(4);
  });

  it('discards stale responses by sequence number', async () => {
    let resolveSlow: ((v: string) => void) | null = null;
    const applied: SnapshotJson[] = [];
    const client = {
      previewRaw: (_s: string, _v: number, t: number) => {
        if (t === 100) {
          return new Promise<string>((resolve) => {
            resolveSlow = resolve;
          });
        }
        return Promise.resolve(JSON.stringify({ time: t, values: {} }));
      },
    } as unknown as EngineClient;
    const loop = makeLoop(client, applied, () => 0);
    const slow = loop.scrub(100); // never resolves until we let it
    await loop.scrub(200);
    resolveSlow!(JSON.stringify({ time: 100, values: {} }));
    await slow;
    expect(applied.map((s) => s.time)).toEqual([200]);
    expect(loop.lastRaw).toContain('"time":200');
  });

  it('serves repeated frames from the cache', async () => {
    const { client, calls } = fakeClient();
    const loop = makeLoop(client, [], () => 0);
    await loop.scrub(300);
    await loop.scrub(600);
    await loop.scrub(300);
    expect(calls).toEqual([300, 600]);
  });
});
