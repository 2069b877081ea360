// World <-> screen mapping and the small screen-space hit tests the
// editor needs. Coverage judgments never happen here — those come from
// the server; this is only for fitting the drawing and locating clicks.

import type { FloorplanDoc, Pt, Ring } from './types.js';

export interface Viewport {
  scale: number; // pixels per meter
  offsetX: number; // world origin -> screen, after y flip
  offsetY: number;
  width: number;
  height: number;
}

export function ringBounds(rings: Ring[]): { lo: Pt; hi: Pt } {
  let loX = Infinity;
  let loY = Infinity;
  let hiX = -Infinity;
  let hiY = -Infinity;
  for (const ring of rings) {
    for (const [x, y] of ring) {
      loX = Math.min(loX, x);
      loY = Math.min(loY, y);
      hiX = Math.max(hiX, x);
      hiY = Math.max(hiY, y);
    }
  }
  return { lo: [loX, loY], hi: [hiX, hiY] };
}

// fit the floorplan into the canvas with a uniform scale, y up in world
// coordinates, y down on screen
export function fitViewport(
  f: FloorplanDoc,
  width: number,
  height: number,
  pad = 30,
): Viewport {
  const { lo, hi } = ringBounds([f.outer, ...f.holes]);
  const spanX = Math.max(hi[0] - lo[0], 1e-9);
  const spanY = Math.max(hi[1] - lo[1], 1e-9);
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const offsetX = pad + (width - 2 * pad - spanX * scale) / 2 - lo[0] * scale;
  const offsetY = pad + (height - 2 * pad - spanY * scale) / 2 + hi[1] * scale;
  return { scale, offsetX, offsetY, width, height };
}

export function toScreen(vp: Viewport, p: Pt): Pt {
  return [vp.offsetX + p[0] * vp.scale, vp.offsetY - p[1] * vp.scale];
}

export function toWorld(vp: Viewport, s: Pt): Pt {
  return [(s[0] - vp.offsetX) / vp.scale, (vp.offsetY - s[1]) / vp.scale];
}

// even-odd point-in-ring test; used only as the pre-check before a
// manual placement is sent (the server revalidates) and for editor hits
export function pointInRing(ring: Ring, x: number, y: number): boolean {
  let inside = false;
  for (let i = 0, j = ring.length - 1; i < ring.length; j = i++) {
    const a = ring[i]!;
    const b = ring[j]!;
    if (a[1] > y !== b[1] > y) {
      const cx = a[0] + ((y - a[1]) * (b[0] - a[0])) / (b[1] - a[1]);
      if (x < cx) inside = !inside;
    }
  }
  return inside;
}

export function pointInFloorplan(f: FloorplanDoc, x: number, y: number): boolean {
  if (!pointInRing(f.outer, x, y)) return false;
  for (const hole of f.holes) {
    if (pointInRing(hole, x, y)) return false;
  }
  return true;
}

export interface VertexHit {
  ring: number; // -1 outer, else hole index
  index: number;
}

// nearest ring vertex within tol (screen px), or null
export function hitVertex(
  f: FloorplanDoc,
  vp: Viewport,
  sx: number,
  sy: number,
  tol = 8,
): VertexHit | null {
  let best: VertexHit | null = null;
  let bestD = tol;
  const consider = (ring: Ring, ringId: number) => {
    for (let i = 0; i < ring.length; i++) {
      const [px, py] = toScreen(vp, ring[i]!);
      const d = Math.hypot(px - sx, py - sy);
      if (d <= bestD) {
        bestD = d;
        best = { ring: ringId, index: i };
      }
    }
  };
  consider(f.outer, -1);
  f.holes.forEach((hole, k) => consider(hole, k));
  return best;
}

export interface EdgeHit extends VertexHit {
  point: Pt; // world point on the edge, where an inserted vertex lands
}

// nearest ring edge within tol (screen px); index is the edge's first
// vertex, so inserting at index+1 splits that edge
export function hitEdge(
  f: FloorplanDoc,
  vp: Viewport,
  sx: number,
  sy: number,
  tol = 6,
): EdgeHit | null {
  let best: EdgeHit | null = null;
  let bestD = tol;
  const consider = (ring: Ring, ringId: number) => {
    for (let i = 0; i < ring.length; i++) {
      const a = toScreen(vp, ring[i]!);
      const b = toScreen(vp, ring[(i + 1) % ring.length]!);
      const ex = b[0] - a[0];
      const ey = b[1] - a[1];
      const ll = ex * ex + ey * ey;
      if (ll === 0) continue;
      let t = ((sx - a[0]) * ex + (sy - a[1]) * ey) / ll;
      t = Math.max(0, Math.min(1, t));
      const d = Math.hypot(a[0] + t * ex - sx, a[1] + t * ey - sy);
      if (d <= bestD) {
        bestD = d;
        const wa = ring[i]!;
        const wb = ring[(i + 1) % ring.length]!;
        best = {
          ring: ringId,
          index: i,
          point: [wa[0] + t * (wb[0] - wa[0]), wa[1] + t * (wb[1] - wa[1])],
        };
      }
    }
  };
  consider(f.outer, -1);
  f.holes.forEach((hole, k) => consider(hole, k));
  return best;
}

export function nearestPlacement(
  placements: Pt[],
  vp: Viewport,
  sx: number,
  sy: number,
  tol = 10,
): number | null {
  let best: number | null = null;
  let bestD = tol;
  for (let i = 0; i < placements.length; i++) {
    const [px, py] = toScreen(vp, placements[i]!);
    const d = Math.hypot(px - sx, py - sy);
    if (d <= bestD) {
      bestD = d;
      best = i;
    }
  }
  return best;
}
