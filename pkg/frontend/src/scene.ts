// Canvas drawing. Pulls everything through the state selectors so the
// scene is a straight projection of the latest server payloads: walls,
// covered/missed wall samples, camera markers, translucent per-camera
// coverage regions, and a range preview around the hovered camera.

import type { SessionState } from './state.js';
import { boundaryDots, cameras, regions } from './state.js';
import type { Pt, Ring } from './types.js';
import type { Viewport } from './transform.js';
import { toScreen } from './transform.js';

const WALL = '#1a1a2e';
const FLOOR = '#f1f3f5';
const COVERED = '#2f9e44';
const MISSED = '#e03131';
const CAMERA = '#212529';
const HUE_STEP = 137.508; // spreads region hues without repeats

export interface Hover {
  placement: number | null; // index into cameras(state)
  cursor: Pt | null; // world coordinates, for the placement preview
}

function ringPath(ctx: CanvasRenderingContext2D, vp: Viewport, ring: Ring): void {
  ring.forEach((p, i) => {
    const [x, y] = toScreen(vp, p);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.closePath();
}

function drawFloorplan(ctx: CanvasRenderingContext2D, s: SessionState, vp: Viewport): void {
  ctx.beginPath();
  ringPath(ctx, vp, s.floorplan.outer);
  for (const hole of s.floorplan.holes) ringPath(ctx, vp, hole);
  ctx.fillStyle = FLOOR;
  ctx.fill('evenodd');
  ctx.strokeStyle = WALL;
  ctx.lineWidth = 2;
  ctx.stroke();
}

function drawRegions(ctx: CanvasRenderingContext2D, s: SessionState, vp: Viewport): void {
  regions(s).forEach((region, i) => {
    if (region.length < 3) return;
    ctx.beginPath();
    ringPath(ctx, vp, region);
    ctx.fillStyle = `hsl(${(i * HUE_STEP) % 360} 65% 45% / 0.28)`;
    ctx.fill();
  });
}

function drawBoundaryDots(ctx: CanvasRenderingContext2D, s: SessionState, vp: Viewport): void {
  const dots = boundaryDots(s);
  if (!dots) return;
  dots.boundary.forEach((p, i) => {
    const [x, y] = toScreen(vp, p);
    ctx.beginPath();
    ctx.arc(x, y, 2.2, 0, 2 * Math.PI);
    ctx.fillStyle = dots.missed.has(i) ? MISSED : COVERED;
    ctx.fill();
  });
}

function drawCameras(ctx: CanvasRenderingContext2D, s: SessionState, vp: Viewport): void {
  cameras(s).forEach((p, i) => {
    const [x, y] = toScreen(vp, p);
    ctx.beginPath();
    ctx.arc(x, y, 7, 0, 2 * Math.PI);
    ctx.fillStyle = CAMERA;
    ctx.fill();
    ctx.strokeStyle = '#ffffff';
    ctx.lineWidth = 1.5;
    ctx.stroke();
    ctx.fillStyle = '#ffffff';
    ctx.font = 'bold 9px system-ui, sans-serif';
    ctx.textAlign = 'center';
    ctx.textBaseline = 'middle';
    ctx.fillText(String(i + 1), x, y);
  });
}

// the max-range circle around the hovered camera, or around the cursor
// while choosing a spot in manual mode
function drawRangePreview(
  ctx: CanvasRenderingContext2D,
  s: SessionState,
  vp: Viewport,
  hover: Hover,
): void {
  const dMax = s.constraints.d_max;
  if (dMax === null) return;
  let center: Pt | null = null;
  if (hover.placement !== null) {
    center = cameras(s)[hover.placement] ?? null;
  } else if (hover.cursor && s.mode === 'manual') {
    center = hover.cursor;
  }
  if (!center) return;
  const [x, y] = toScreen(vp, center);
  ctx.beginPath();
  ctx.arc(x, y, dMax * vp.scale, 0, 2 * Math.PI);
  ctx.strokeStyle = 'rgba(33, 37, 41, 0.45)';
  ctx.setLineDash([6, 4]);
  ctx.lineWidth = 1.2;
  ctx.stroke();
  ctx.setLineDash([]);
}

function drawEditHandles(ctx: CanvasRenderingContext2D, s: SessionState, vp: Viewport): void {
  const drawRing = (ring: Ring) => {
    for (const p of ring) {
      const [x, y] = toScreen(vp, p);
      ctx.beginPath();
      ctx.rect(x - 3.5, y - 3.5, 7, 7);
      ctx.fillStyle = '#ffffff';
      ctx.fill();
      ctx.strokeStyle = WALL;
      ctx.lineWidth = 1;
      ctx.stroke();
    }
  };
  drawRing(s.floorplan.outer);
  for (const hole of s.floorplan.holes) drawRing(hole);
}

export function renderScene(
  ctx: CanvasRenderingContext2D,
  s: SessionState,
  vp: Viewport,
  hover: Hover,
  editing: boolean,
): void {
  ctx.clearRect(0, 0, vp.width, vp.height);
  drawFloorplan(ctx, s, vp);
  drawRegions(ctx, s, vp);
  drawBoundaryDots(ctx, s, vp);
  drawCameras(ctx, s, vp);
  drawRangePreview(ctx, s, vp, hover);
  if (editing) drawEditHandles(ctx, s, vp);
}
