import { describe, expect, it } from 'vitest';

import { ApiClient, HttpError, LatestOnly, RequestSequencer } from '../src/api.js';
import type { FetchLike } from '../src/api.js';
import type { FloorplanDoc } from '../src/types.js';
import { DEFAULT_CONSTRAINTS, DEFAULT_SAMPLING } from '../src/types.js';

const ROOM: FloorplanDoc = {
  version: 1,
  units: 'meters',
  outer: [[0, 0], [8, 0], [8, 6], [0, 6]],
  holes: [],
};

interface RecordedCall {
  url: string;
  init?: RequestInit;
}

function fakeFetch(
  handler: (url: string, init?: RequestInit) => Response,
): { fn: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fn: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return handler(url, init);
  };
  return { fn, calls };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('posts the exact request document and returns the parsed payload', async () => {
    const payload = { region: [[0, 0], [8, 0], [4, 6]] };
    const { fn, calls } = fakeFetch(() => jsonResponse(payload));
    const client = new ApiClient(fn);
    const out = await client.visibility(ROOM, [4, 3], DEFAULT_CONSTRAINTS);
    expect(out).toEqual(payload);
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe('/api/visibility');
    expect(calls[0]!.init?.method).toBe('POST');
    const body = JSON.parse(String(calls[0]!.init?.body));
    expect(body).toEqual({
      floorplan: ROOM,
      point: [4, 3],
      constraints: { d_min: 0, d_max: null, theta_max_deg: null },
    });
  });

  it('sends plan requests with solver and budget', async () => {
    const { fn, calls } = fakeFetch(() => jsonResponse({}));
    await new ApiClient(fn).plan({
      floorplan: ROOM,
      sampling: DEFAULT_SAMPLING,
      constraints: { d_min: 0.5, d_max: 5, theta_max_deg: 45 },
      solver: 'exact',
      time_budget_s: 30,
    });
    const body = JSON.parse(String(calls[0]!.init?.body));
    expect(body.solver).toBe('exact');
    expect(body.time_budget_s).toBe(30);
    expect(body.constraints).toEqual({ d_min: 0.5, d_max: 5, theta_max_deg: 45 });
    expect(body.sampling).toEqual(DEFAULT_SAMPLING);
  });

  it('turns a structured error body into a typed HttpError', async () => {
    const { fn } = fakeFetch(() =>
      jsonResponse({ error: { type: 'ValueError', message: 'boundary spacing must be positive' } }, 400),
    );
    const client = new ApiClient(fn);
    const err = await client
      .verify(ROOM, [[1, 1]], DEFAULT_SAMPLING, DEFAULT_CONSTRAINTS)
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(HttpError);
    const http = err as HttpError;
    expect(http.type).toBe('ValueError');
    expect(http.message).toBe('boundary spacing must be positive');
    expect(http.status).toBe(400);
  });

  it('falls back to the status line on a non-JSON error body', async () => {
    const { fn } = fakeFetch(
      () => new Response('gateway exploded', { status: 502, statusText: 'Bad Gateway' }),
    );
    const err = await new ApiClient(fn)
      .plan({
        floorplan: ROOM,
        sampling: DEFAULT_SAMPLING,
        constraints: DEFAULT_CONSTRAINTS,
        solver: 'greedy',
        time_budget_s: 10,
      })
      .then(() => null, (e: unknown) => e);
    expect(err).toBeInstanceOf(HttpError);
    expect((err as HttpError).status).toBe(502);
    expect((err as HttpError).message).toMatch(/502/);
  });

  it('prefixes a configured base url', async () => {
    const { fn, calls } = fakeFetch(() => jsonResponse({ status: 'ok', version: '0.1.0' }));
    const out = await new ApiClient(fn, 'http://127.0.0.1:8731').health();
    expect(out.status).toBe('ok');
    expect(calls[0]!.url).toBe('http://127.0.0.1:8731/api/health');
  });
});

function deferred<T>() {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

describe('request sequencing', () => {
  it('only the most recently issued sequence number is current', () => {
    const seq = new RequestSequencer();
    const a = seq.next();
    const b = seq.next();
    expect(b).toBeGreaterThan(a);
    expect(seq.isCurrent(a)).toBe(false);
    expect(seq.isCurrent(b)).toBe(true);
  });

  it('a slow response that arrives after a newer request is ignored', async () => {
    const ch = new LatestOnly();
    const slow = deferred<string>();
    const fast = deferred<string>();
    const p1 = ch.run(() => slow.promise);
    const p2 = ch.run(() => fast.promise);
    fast.resolve('newer');
    await expect(p2).resolves.toBe('newer');
    slow.resolve('older'); // arrives late: must not surface
    await expect(p1).resolves.toBeNull();
  });

  it('a stale failure is swallowed, not surfaced', async () => {
    const ch = new LatestOnly();
    const slow = deferred<string>();
    const fast = deferred<string>();
    const p1 = ch.run(() => slow.promise);
    const p2 = ch.run(() => fast.promise);
    slow.reject(new Error('timeout on a superseded request'));
    await expect(p1).resolves.toBeNull();
    fast.resolve('ok');
    await expect(p2).resolves.toBe('ok');
  });

  it('a current failure propagates to the caller', async () => {
    const ch = new LatestOnly();
    const d = deferred<string>();
    const p = ch.run(() => d.promise);
    d.reject(new Error('server unreachable'));
    await expect(p).rejects.toThrow('server unreachable');
  });
});
