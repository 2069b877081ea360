// DOM wiring: forms, canvas interaction, and the request flows. All
// coverage numbers shown anywhere come from the latest server payload
// held in the session state; this file only moves data between the DOM,
// the state transitions, and the API client.

import { ApiClient, HttpError, LatestOnly } from './api.js';
import { deleteVertex, insertVertex, moveVertex } from './editor.js';
import type { Hover } from './scene.js';
import { renderScene } from './scene.js';
import type { SessionState } from './state.js';
import {
  applyComparison,
  applyPlan,
  applyRegion,
  applyVerify,
  boundaryDots,
  cameraCount,
  cameras,
  clearPlacements,
  exportSession,
  importSession,
  initialState,
  placeCamera,
  rollbackPlacement,
  setConstraints,
  setError,
  setFloorplan,
  setMode,
  setSampling,
  setSolver,
  undo,
  validateForms,
} from './state.js';
import type { SessionDoc } from './state.js';
import type { FloorplanDoc, Pt } from './types.js';
import type { VertexHit, Viewport } from './transform.js';
import { fitViewport, hitEdge, hitVertex, nearestPlacement, pointInFloorplan, toWorld } from './transform.js';

const PRESETS: Record<string, FloorplanDoc> = {
  corridor: {
    version: 1,
    units: 'meters',
    outer: [[0, 0], [36, 0], [36, 36], [0, 36]],
    holes: [[[6, 6], [6, 30], [30, 30], [30, 6]]],
  },
  lroom: {
    version: 1,
    units: 'meters',
    outer: [[0, 0], [6, 0], [6, 3], [3, 3], [3, 6], [0, 6]],
    holes: [],
  },
  studio: {
    version: 1,
    units: 'meters',
    outer: [[0, 0], [6, 0], [6, 4.5], [0, 4.5]],
    holes: [],
  },
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>('scene');
const ctx = canvas.getContext('2d')!;
const banner = el<HTMLDivElement>('error-banner');
const serverInfo = el<HTMLSpanElement>('server-info');
const statCameras = el<HTMLSpanElement>('stat-cameras');
const statCoverage = el<HTMLSpanElement>('stat-coverage');
const statStatus = el<HTMLSpanElement>('stat-status');
const statElapsed = el<HTMLSpanElement>('stat-elapsed');
const comparePanel = el<HTMLDivElement>('compare-panel');
const compareBody = el<HTMLDivElement>('compare-body');
const btnPlan = el<HTMLButtonElement>('btn-plan');
const btnCompare = el<HTMLButtonElement>('btn-compare');
const btnUndo = el<HTMLButtonElement>('btn-undo');
const btnClear = el<HTMLButtonElement>('btn-clear');
const editWalls = el<HTMLInputElement>('edit-walls');

const client = new ApiClient();
const planChannel = new LatestOnly();
const verifyChannel = new LatestOnly();

let state: SessionState = initialState(PRESETS['corridor']!);
let viewport: Viewport = fitViewport(state.floorplan, canvas.width, canvas.height);
let hover: Hover = { placement: null, cursor: null };
let dragging: VertexHit | null = null;
let busy = 0;

function formErrors(): string[] {
  return validateForms(state.sampling, state.constraints, state.timeBudgetS);
}

function update(next: SessionState): void {
  const floorplanChanged = next.floorplan !== state.floorplan;
  state = next;
  if (floorplanChanged) {
    viewport = fitViewport(state.floorplan, canvas.width, canvas.height);
  }
  render();
}

function render(): void {
  try {
    renderScene(ctx, state, viewport, hover, editWalls.checked);
  } catch (err) {
    // keep the previous scene; only the banner changes
    state = setError(state, `render failed: ${String(err)}`);
  }
  banner.textContent = state.error ?? '';
  banner.classList.toggle('hidden', state.error === null);

  statCameras.textContent = `cameras: ${cameraCount(state)}`;
  const dots = boundaryDots(state);
  statCoverage.textContent = dots
    ? `covered ${dots.covered.size} / missed ${dots.missed.size} of ${dots.boundary.length}`
    : 'coverage: —';
  if (busy > 0) {
    statStatus.textContent = 'working…';
  } else if (state.mode === 'auto' && state.autoPlan) {
    const st = state.autoPlan.solution.status;
    statStatus.textContent = st === 'feasible_bound_gap' ? 'best known' : st;
  } else {
    statStatus.textContent = '';
  }

  btnPlan.disabled = state.mode !== 'auto' || busy > 0;
  btnCompare.disabled = state.mode !== 'manual' || busy > 0;
  btnUndo.disabled = state.history.length === 0 || state.mode !== 'manual';
  btnClear.disabled = state.manualPlacements.length === 0 || state.mode !== 'manual';

  renderComparison();
}

function renderComparison(): void {
  const cmp = state.comparison;
  if (!cmp || state.mode !== 'manual') {
    comparePanel.classList.add('hidden');
    return;
  }
  comparePanel.classList.remove('hidden');
  const optimalLabel = cmp.optimalStatus === 'optimal' ? 'optimal' : 'best known';
  const mins = Math.floor(cmp.elapsedMs / 60000);
  const secs = Math.floor((cmp.elapsedMs % 60000) / 1000);
  let verdict: string;
  if (cmp.missedCount > 0) {
    verdict = `<span class="badge warn">${cmp.missedCount} wall points missed</span>`;
  } else if (cmp.optimalStatus === 'optimal' && cmp.humanCount === cmp.optimalCount) {
    verdict = '<span class="badge good">matches the optimum</span>';
  } else {
    verdict = '<span class="badge good">full coverage</span>';
  }
  compareBody.innerHTML =
    `your cameras: <b>${cmp.humanCount}</b> &nbsp;•&nbsp; ` +
    `${optimalLabel}: <b>${cmp.optimalCount}</b> &nbsp;•&nbsp; ` +
    `missed: <b>${cmp.missedCount}</b> &nbsp;•&nbsp; ` +
    `time: ${mins}m ${String(secs).padStart(2, '0')}s<br>${verdict}`;
}

function withBusy<T>(p: Promise<T>): Promise<T> {
  busy++;
  render();
  return p.finally(() => {
    busy--;
    render();
  });
}

// ------------------------------------------------------------- requests

async function requestPlan(): Promise<void> {
  const errors = formErrors();
  if (errors.length) {
    update(setError(state, errors.join('; ')));
    return;
  }
  try {
    const resp = await withBusy(
      planChannel.run(() =>
        client.plan({
          floorplan: state.floorplan,
          sampling: state.sampling,
          constraints: state.constraints,
          solver: state.solver,
          time_budget_s: state.timeBudgetS,
        }),
      ),
    );
    if (resp) update(applyPlan(state, resp));
  } catch (err) {
    update(setError(state, errMessage(err)));
  }
}

async function reverify(): Promise<void> {
  try {
    const resp = await withBusy(
      verifyChannel.run(() =>
        client.verify(state.floorplan, state.manualPlacements, state.sampling, state.constraints),
      ),
    );
    if (resp) update(applyVerify(state, resp));
  } catch (err) {
    update(setError(state, errMessage(err)));
  }
}

async function requestRegion(index: number, point: Pt): Promise<void> {
  try {
    const resp = await client.visibility(state.floorplan, point, state.constraints);
    const current = state.manualPlacements[index];
    if (current && current[0] === point[0] && current[1] === point[1]) {
      update(applyRegion(state, index, resp.region));
    }
  } catch {
    // region overlays are cosmetic; verify already reported any real error
  }
}

async function placeAt(p: Pt): Promise<void> {
  const errors = formErrors();
  if (errors.length) {
    update(setError(state, errors.join('; ')));
    return;
  }
  if (!pointInFloorplan(state.floorplan, p[0], p[1])) {
    update(setError(state, 'that point is outside the floorplan'));
    return;
  }
  update(placeCamera(state, p, Date.now()));
  const index = state.manualPlacements.length - 1;
  try {
    const resp = await withBusy(
      verifyChannel.run(() =>
        client.verify(state.floorplan, state.manualPlacements, state.sampling, state.constraints),
      ),
    );
    if (resp) update(applyVerify(state, resp));
    void requestRegion(index, p);
  } catch (err) {
    update(rollbackPlacement(state, errMessage(err)));
  }
}

async function requestComparison(): Promise<void> {
  const errors = formErrors();
  if (errors.length) {
    update(setError(state, errors.join('; ')));
    return;
  }
  try {
    const resp = await withBusy(
      planChannel.run(() =>
        client.plan({
          floorplan: state.floorplan,
          sampling: state.sampling,
          constraints: state.constraints,
          solver: state.solver,
          time_budget_s: state.timeBudgetS,
        }),
      ),
    );
    if (resp) update(applyComparison(state, resp, Date.now()));
  } catch (err) {
    update(setError(state, errMessage(err)));
  }
}

function errMessage(err: unknown): string {
  if (err instanceof HttpError) return `${err.type}: ${err.message}`;
  return String(err);
}

// ---------------------------------------------------------------- forms

function num(id: string): number {
  return Number(el<HTMLInputElement>(id).value);
}

function numOrNull(id: string): number | null {
  const raw = el<HTMLInputElement>(id).value.trim();
  return raw === '' ? null : Number(raw);
}

function readForms(): void {
  let next = setSampling(state, {
    boundary_spacing: num('boundary-spacing'),
    grid_spacing: num('grid-spacing'),
    d_min: 0,
    fov_y_deg: num('fov-y'),
    h_floor: num('h-floor'),
    h_ceiling: num('h-ceiling'),
  });
  next = setConstraints(next, {
    d_min: num('d-min'),
    d_max: numOrNull('d-max'),
    theta_max_deg: numOrNull('theta-max'),
  });
  next = setSolver(
    next,
    el<HTMLSelectElement>('solver').value as 'greedy' | 'exact',
    num('time-budget'),
  );
  const errors = validateForms(next.sampling, next.constraints, next.timeBudgetS);
  update(errors.length ? setError(next, errors.join('; ')) : next);
}

function writeForms(): void {
  el<HTMLInputElement>('boundary-spacing').value = String(state.sampling.boundary_spacing);
  el<HTMLInputElement>('grid-spacing').value = String(state.sampling.grid_spacing);
  el<HTMLInputElement>('fov-y').value = String(state.sampling.fov_y_deg);
  el<HTMLInputElement>('h-floor').value = String(state.sampling.h_floor);
  el<HTMLInputElement>('h-ceiling').value = String(state.sampling.h_ceiling);
  el<HTMLInputElement>('d-min').value = String(state.constraints.d_min);
  el<HTMLInputElement>('d-max').value = state.constraints.d_max === null ? '' : String(state.constraints.d_max);
  el<HTMLInputElement>('theta-max').value =
    state.constraints.theta_max_deg === null ? '' : String(state.constraints.theta_max_deg);
  el<HTMLSelectElement>('solver').value = state.solver;
  el<HTMLInputElement>('time-budget').value = String(state.timeBudgetS);
  el<HTMLInputElement>('mode-auto').checked = state.mode === 'auto';
  el<HTMLInputElement>('mode-manual').checked = state.mode === 'manual';
}

function switchFloorplan(f: FloorplanDoc): void {
  update({
    ...initialState(f),
    sampling: state.sampling,
    constraints: state.constraints,
    solver: state.solver,
    timeBudgetS: state.timeBudgetS,
    mode: state.mode,
  });
}

// --------------------------------------------------------- canvas input

function screenPoint(ev: MouseEvent): Pt {
  const rect = canvas.getBoundingClientRect();
  return [
    ((ev.clientX - rect.left) / rect.width) * canvas.width,
    ((ev.clientY - rect.top) / rect.height) * canvas.height,
  ];
}

canvas.addEventListener('mousemove', (ev) => {
  const [sx, sy] = screenPoint(ev);
  if (dragging) {
    const result = moveVertex(state.floorplan, dragging.ring, dragging.index, toWorld(viewport, [sx, sy]));
    if (result.ok) update({ ...state, floorplan: result.floorplan });
    return;
  }
  hover = {
    placement: nearestPlacement(cameras(state), viewport, sx, sy),
    cursor: state.mode === 'manual' && !editWalls.checked ? toWorld(viewport, [sx, sy]) : null,
  };
  render();
});

canvas.addEventListener('mousedown', (ev) => {
  if (!editWalls.checked || ev.button !== 0) return;
  const [sx, sy] = screenPoint(ev);
  dragging = hitVertex(state.floorplan, viewport, sx, sy);
});

canvas.addEventListener('mouseup', () => {
  if (!dragging) return;
  dragging = null;
  // the drag already updated the rings; now every overlay is stale
  update(setFloorplan(state, state.floorplan));
  if (state.mode === 'manual' && state.manualPlacements.length) void reverify();
});

canvas.addEventListener('click', (ev) => {
  if (editWalls.checked || dragging) return;
  if (state.mode !== 'manual') return;
  const [sx, sy] = screenPoint(ev);
  void placeAt(toWorld(viewport, [sx, sy]));
});

canvas.addEventListener('dblclick', (ev) => {
  if (!editWalls.checked) return;
  const [sx, sy] = screenPoint(ev);
  const hit = hitEdge(state.floorplan, viewport, sx, sy);
  if (!hit) return;
  const result = insertVertex(state.floorplan, hit.ring, hit.index, hit.point);
  if (result.ok) {
    update(setFloorplan(state, result.floorplan));
    if (state.mode === 'manual' && state.manualPlacements.length) void reverify();
  } else {
    update(setError(state, result.error));
  }
});

canvas.addEventListener('contextmenu', (ev) => {
  if (!editWalls.checked) return;
  ev.preventDefault();
  const [sx, sy] = screenPoint(ev);
  const hit = hitVertex(state.floorplan, viewport, sx, sy);
  if (!hit) return;
  const result = deleteVertex(state.floorplan, hit.ring, hit.index);
  if (result.ok) {
    update(setFloorplan(state, result.floorplan));
    if (state.mode === 'manual' && state.manualPlacements.length) void reverify();
  } else {
    update(setError(state, result.error));
  }
});

canvas.addEventListener('mouseleave', () => {
  hover = { placement: null, cursor: null };
  render();
});

// -------------------------------------------------------------- buttons

btnPlan.addEventListener('click', () => void requestPlan());
btnCompare.addEventListener('click', () => void requestComparison());
btnUndo.addEventListener('click', () => update(undo(state)));
btnClear.addEventListener('click', () => update(clearPlacements(state)));

el<HTMLInputElement>('mode-auto').addEventListener('change', () => {
  update(setMode(state, 'auto', Date.now()));
});
el<HTMLInputElement>('mode-manual').addEventListener('change', () => {
  update(setMode(state, 'manual', Date.now()));
});

el<HTMLSelectElement>('preset').addEventListener('change', (ev) => {
  const key = (ev.target as HTMLSelectElement).value;
  const preset = PRESETS[key];
  if (preset) switchFloorplan(structuredClone(preset));
});

el<HTMLInputElement>('floorplan-file').addEventListener('change', async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    const doc = JSON.parse(await file.text()) as Partial<FloorplanDoc>;
    if (!Array.isArray(doc.outer)) throw new Error('missing "outer" ring');
    switchFloorplan({
      version: doc.version ?? 1,
      units: doc.units ?? 'meters',
      outer: doc.outer,
      holes: doc.holes ?? [],
    });
  } catch (err) {
    update(setError(state, `could not load floorplan: ${String(err)}`));
  }
  (ev.target as HTMLInputElement).value = '';
});

el<HTMLButtonElement>('btn-export').addEventListener('click', () => {
  const doc = exportSession(state);
  const blob = new Blob([JSON.stringify(doc, null, 2)], { type: 'application/json' });
  const a = document.createElement('a');
  a.href = URL.createObjectURL(blob);
  a.download = 'camplan-session.json';
  a.click();
  URL.revokeObjectURL(a.href);
});

el<HTMLInputElement>('session-file').addEventListener('change', async (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  try {
    const doc = JSON.parse(await file.text()) as SessionDoc;
    update(importSession(doc, Date.now()));
    writeForms();
    if (state.mode === 'manual' && state.manualPlacements.length) {
      await reverify();
      state.manualPlacements.forEach((p, i) => void requestRegion(i, p));
    }
  } catch (err) {
    update(setError(state, `could not load session: ${String(err)}`));
  }
  (ev.target as HTMLInputElement).value = '';
});

for (const id of [
  'boundary-spacing', 'grid-spacing', 'fov-y', 'h-floor', 'h-ceiling',
  'd-min', 'd-max', 'theta-max', 'solver', 'time-budget',
]) {
  el(id).addEventListener('change', readForms);
}

editWalls.addEventListener('change', render);

// ----------------------------------------------------------------- boot

setInterval(() => {
  if (state.mode === 'manual' && state.manualStartedAt !== null) {
    const ms = Date.now() - state.manualStartedAt;
    const mins = Math.floor(ms / 60000);
    const secs = Math.floor((ms % 60000) / 1000);
    statElapsed.textContent = `session: ${mins}m ${String(secs).padStart(2, '0')}s`;
  } else {
    statElapsed.textContent = '';
  }
}, 1000);

void client
  .health()
  .then((h) => {
    serverInfo.textContent = `server ${h.version}`;
  })
  .catch(() => {
    serverInfo.textContent = 'server unreachable';
  });

writeForms();
render();
