// Ring editing: drag, insert, delete vertices on the outer ring or a
// hole, with a simplicity pre-check so obviously broken shapes never
// reach the server. Operations are pure — they return a fresh document
// or an error string and leave the input untouched.

import type { FloorplanDoc, Pt, Ring } from './types.js';
import { pointInRing } from './transform.js';

export type EditResult = { ok: true; floorplan: FloorplanDoc } | { ok: false; error: string };

function cross(ox: number, oy: number, ax: number, ay: number, bx: number, by: number): number {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

// proper or touching intersection of closed segments a-b and c-d
export function segmentsIntersect(a: Pt, b: Pt, c: Pt, d: Pt): boolean {
  const d1 = cross(c[0], c[1], d[0], d[1], a[0], a[1]);
  const d2 = cross(c[0], c[1], d[0], d[1], b[0], b[1]);
  const d3 = cross(a[0], a[1], b[0], b[1], c[0], c[1]);
  const d4 = cross(a[0], a[1], b[0], b[1], d[0], d[1]);
  if ((d1 > 0) !== (d2 > 0) && (d3 > 0) !== (d4 > 0)) return true;
  const on = (px: number, py: number, qx: number, qy: number, rx: number, ry: number) =>
    cross(px, py, qx, qy, rx, ry) === 0 &&
    Math.min(px, qx) <= rx && rx <= Math.max(px, qx) &&
    Math.min(py, qy) <= ry && ry <= Math.max(py, qy);
  return (
    on(c[0], c[1], d[0], d[1], a[0], a[1]) ||
    on(c[0], c[1], d[0], d[1], b[0], b[1]) ||
    on(a[0], a[1], b[0], b[1], c[0], c[1]) ||
    on(a[0], a[1], b[0], b[1], d[0], d[1])
  );
}

// no repeated vertices, no zero-length edges, no crossing between
// non-adjacent edges
export function ringIsSimple(ring: Ring): boolean {
  const n = ring.length;
  if (n < 3) return false;
  for (let i = 0; i < n; i++) {
    const a = ring[i]!;
    const b = ring[(i + 1) % n]!;
    if (a[0] === b[0] && a[1] === b[1]) return false;
    for (let j = i + 1; j < n; j++) {
      if (j === i || (j + 1) % n === i || (i + 1) % n === j) continue;
      if (segmentsIntersect(a, b, ring[j]!, ring[(j + 1) % n]!)) return false;
    }
  }
  return true;
}

function getRing(f: FloorplanDoc, ringId: number): Ring | null {
  if (ringId === -1) return f.outer;
  return f.holes[ringId] ?? null;
}

function withRing(f: FloorplanDoc, ringId: number, ring: Ring): FloorplanDoc {
  if (ringId === -1) return { ...f, outer: ring };
  const holes = f.holes.map((h, k) => (k === ringId ? ring : h));
  return { ...f, holes };
}

function checked(f: FloorplanDoc, ringId: number, ring: Ring, what: string): EditResult {
  if (!ringIsSimple(ring)) {
    return { ok: false, error: `${what} would make the ring self-intersect` };
  }
  const next = withRing(f, ringId, ring);
  if (ringId >= 0) {
    // a hole must stay inside the outer ring
    for (const [x, y] of ring) {
      if (!pointInRing(next.outer, x, y)) {
        return { ok: false, error: `${what} would push the hole outside the room` };
      }
    }
  }
  return { ok: true, floorplan: next };
}

export function moveVertex(f: FloorplanDoc, ringId: number, index: number, to: Pt): EditResult {
  const ring = getRing(f, ringId);
  if (!ring || index < 0 || index >= ring.length) {
    return { ok: false, error: 'no such vertex' };
  }
  const moved = ring.map((p, k) => (k === index ? ([to[0], to[1]] as Pt) : p));
  return checked(f, ringId, moved, 'moving this vertex');
}

export function insertVertex(f: FloorplanDoc, ringId: number, afterIndex: number, at: Pt): EditResult {
  const ring = getRing(f, ringId);
  if (!ring || afterIndex < 0 || afterIndex >= ring.length) {
    return { ok: false, error: 'no such edge' };
  }
  const next = [...ring.slice(0, afterIndex + 1), [at[0], at[1]] as Pt, ...ring.slice(afterIndex + 1)];
  return checked(f, ringId, next, 'inserting a vertex here');
}

export function deleteVertex(f: FloorplanDoc, ringId: number, index: number): EditResult {
  const ring = getRing(f, ringId);
  if (!ring || index < 0 || index >= ring.length) {
    return { ok: false, error: 'no such vertex' };
  }
  if (ring.length <= 3) {
    return { ok: false, error: 'a ring needs at least three vertices' };
  }
  const next = ring.filter((_, k) => k !== index);
  return checked(f, ringId, next, 'deleting this vertex');
}
