// Session state and its transitions. Everything here is pure data in,
// data out — the DOM and the network live elsewhere — so the invariants
// (counts always mirror the latest server payload, undo restores the
// exact prior state, export/import round-trips) are directly testable.

import type {
  ConstraintsForm,
  FloorplanDoc,
  PlanResponse,
  Pt,
  Ring,
  SamplingForm,
  SolutionDoc,
  SolverChoice,
  VerifyResponse,
} from './types.js';
import { DEFAULT_CONSTRAINTS, DEFAULT_SAMPLING } from './types.js';

export type Mode = 'auto' | 'manual';

// the slice of state a manual action can change; snapshots of it back
// the undo stack and the rollback on a rejected placement
interface ManualSnapshot {
  manualPlacements: Pt[];
  manualRegions: (Ring | null)[];
  verifyReport: VerifyResponse | null;
  comparison: Comparison | null;
}

export interface Comparison {
  humanCount: number;
  optimalCount: number;
  optimalStatus: SolutionDoc['status'];
  missedCount: number;
  elapsedMs: number;
}

export interface SessionState {
  floorplan: FloorplanDoc;
  sampling: SamplingForm;
  constraints: ConstraintsForm;
  solver: SolverChoice;
  timeBudgetS: number;
  mode: Mode;
  manualPlacements: Pt[];
  // one region per placement, filled in as /api/visibility answers arrive
  manualRegions: (Ring | null)[];
  verifyReport: VerifyResponse | null;
  autoPlan: PlanResponse | null;
  comparison: Comparison | null;
  history: ManualSnapshot[];
  error: string | null;
  manualStartedAt: number | null;
}

function snapshot(s: SessionState): ManualSnapshot {
  return {
    manualPlacements: s.manualPlacements,
    manualRegions: s.manualRegions,
    verifyReport: s.verifyReport,
    comparison: s.comparison,
  };
}

export function initialState(floorplan: FloorplanDoc): SessionState {
  return {
    floorplan,
    sampling: { ...DEFAULT_SAMPLING },
    constraints: { ...DEFAULT_CONSTRAINTS },
    solver: 'exact',
    timeBudgetS: 60,
    mode: 'auto',
    manualPlacements: [],
    manualRegions: [],
    verifyReport: null,
    autoPlan: null,
    comparison: null,
    history: [],
    error: null,
    manualStartedAt: null,
  };
}

export function setMode(s: SessionState, mode: Mode, now: number): SessionState {
  if (mode === s.mode) return s;
  return {
    ...s,
    mode,
    comparison: null,
    error: null,
    manualStartedAt: mode === 'manual' ? s.manualStartedAt ?? now : s.manualStartedAt,
  };
}

export function placeCamera(s: SessionState, p: Pt, now: number): SessionState {
  return {
    ...s,
    history: [...s.history, snapshot(s)],
    manualPlacements: [...s.manualPlacements, p],
    manualRegions: [...s.manualRegions, null],
    comparison: null,
    error: null,
    manualStartedAt: s.manualStartedAt ?? now,
  };
}

// server rejected the optimistic placement: restore the pre-click state
// and surface the message
export function rollbackPlacement(s: SessionState, message: string): SessionState {
  const prev = s.history[s.history.length - 1];
  if (!prev) return { ...s, error: message };
  return { ...s, ...prev, history: s.history.slice(0, -1), error: message };
}

export function undo(s: SessionState): SessionState {
  const prev = s.history[s.history.length - 1];
  if (!prev) return s;
  return { ...s, ...prev, history: s.history.slice(0, -1), error: null };
}

export function clearPlacements(s: SessionState): SessionState {
  if (s.manualPlacements.length === 0) return s;
  return {
    ...s,
    history: [...s.history, snapshot(s)],
    manualPlacements: [],
    manualRegions: [],
    verifyReport: null,
    comparison: null,
  };
}

export function applyVerify(s: SessionState, resp: VerifyResponse): SessionState {
  return { ...s, verifyReport: resp, error: null };
}

// region answers can arrive after further edits; drop ones that no
// longer match a placement
export function applyRegion(s: SessionState, index: number, region: Ring): SessionState {
  if (index < 0 || index >= s.manualRegions.length) return s;
  const regions = s.manualRegions.map((r, k) => (k === index ? region : r));
  return { ...s, manualRegions: regions };
}

export function applyPlan(s: SessionState, resp: PlanResponse): SessionState {
  return { ...s, autoPlan: resp, error: null };
}

export function applyComparison(s: SessionState, resp: PlanResponse, now: number): SessionState {
  return {
    ...s,
    comparison: {
      humanCount: s.manualPlacements.length,
      optimalCount: resp.solution.objective,
      optimalStatus: resp.solution.status,
      missedCount: s.verifyReport ? s.verifyReport.missed.length : 0,
      elapsedMs: s.manualStartedAt === null ? 0 : now - s.manualStartedAt,
    },
    error: null,
  };
}

export function setError(s: SessionState, message: string): SessionState {
  return { ...s, error: message };
}

export function clearError(s: SessionState): SessionState {
  return s.error === null ? s : { ...s, error: null };
}

// wall edits invalidate every server-derived overlay; placements stay
// (the next verify revalidates them)
export function setFloorplan(s: SessionState, floorplan: FloorplanDoc): SessionState {
  return {
    ...s,
    floorplan,
    manualRegions: s.manualPlacements.map(() => null),
    verifyReport: null,
    autoPlan: null,
    comparison: null,
    history: [],
  };
}

export function setSampling(s: SessionState, sampling: SamplingForm): SessionState {
  return { ...s, sampling, comparison: null };
}

export function setConstraints(s: SessionState, constraints: ConstraintsForm): SessionState {
  return { ...s, constraints, comparison: null };
}

export function setSolver(s: SessionState, solver: SolverChoice, timeBudgetS: number): SessionState {
  return { ...s, solver, timeBudgetS, comparison: null };
}

// ---------------------------------------------------------------- selectors

export function cameras(s: SessionState): Pt[] {
  if (s.mode === 'manual') return s.manualPlacements;
  return s.autoPlan ? s.autoPlan.solution.chosen : [];
}

export function regions(s: SessionState): Ring[] {
  if (s.mode === 'manual') {
    return s.manualRegions.filter((r): r is Ring => r !== null);
  }
  return s.autoPlan ? s.autoPlan.coverage_regions : [];
}

export interface BoundaryDots {
  boundary: Pt[];
  covered: Set<number>;
  missed: Set<number>;
}

// the covered/missed judgment drawn on screen, verbatim from the most
// recent server payload for the active mode
export function boundaryDots(s: SessionState): BoundaryDots | null {
  const src = s.mode === 'manual' ? s.verifyReport : s.autoPlan;
  if (!src) return null;
  return {
    boundary: src.boundary,
    covered: new Set(src.covered),
    missed: new Set(src.missed),
  };
}

export function cameraCount(s: SessionState): number {
  return cameras(s).length;
}

export function missedCount(s: SessionState): number {
  const dots = boundaryDots(s);
  return dots ? dots.missed.size : 0;
}

// ------------------------------------------------------- form validation

export function standoffFromFov(fovYDeg: number, hFloor: number, hCeiling: number): number {
  const half = (fovYDeg * Math.PI) / 360;
  return Math.max(hFloor, hCeiling) / Math.tan(half);
}

// same cross-checks the server applies to a plan request, so bad forms
// fail before a request is made
export function validateForms(
  sampling: SamplingForm,
  constraints: ConstraintsForm,
  timeBudgetS: number,
): string[] {
  const errors: string[] = [];
  if (!(sampling.boundary_spacing > 0)) errors.push('boundary spacing must be positive');
  if (!(sampling.grid_spacing > 0)) errors.push('grid spacing must be positive');
  if (!(sampling.fov_y_deg > 0 && sampling.fov_y_deg < 180)) {
    errors.push('vertical fov must be between 0 and 180 degrees');
  }
  if (!(sampling.h_floor > 0) || !(sampling.h_ceiling > 0)) {
    errors.push('camera heights must be positive');
  }
  if (sampling.d_min < 0 || constraints.d_min < 0) {
    errors.push('minimum range must be non-negative');
  }
  if (
    constraints.theta_max_deg !== null &&
    !(constraints.theta_max_deg > 0 && constraints.theta_max_deg <= 90)
  ) {
    errors.push('max incidence angle must be in (0, 90] degrees');
  }
  if (!(timeBudgetS > 0)) errors.push('time budget must be positive');
  if (constraints.d_max !== null) {
    const eff = Math.max(
      standoffFromFov(sampling.fov_y_deg, sampling.h_floor, sampling.h_ceiling),
      sampling.d_min,
      constraints.d_min,
    );
    if (constraints.d_max <= eff) {
      errors.push(
        `max range ${constraints.d_max} is within the effective minimum range ${eff.toFixed(3)}`,
      );
    }
  }
  return errors;
}

// --------------------------------------------------------- session files

export interface SessionDoc {
  version: number;
  floorplan: FloorplanDoc;
  sampling: SamplingForm;
  constraints: ConstraintsForm;
  solver: SolverChoice;
  time_budget_s: number;
  mode: Mode;
  placements: Pt[];
}

export function exportSession(s: SessionState): SessionDoc {
  return {
    version: 1,
    floorplan: s.floorplan,
    sampling: { ...s.sampling },
    constraints: { ...s.constraints },
    solver: s.solver,
    time_budget_s: s.timeBudgetS,
    mode: s.mode,
    placements: s.manualPlacements.map((p) => [p[0], p[1]]),
  };
}

export function importSession(doc: SessionDoc, now: number): SessionState {
  if (doc.version !== 1) throw new Error(`unsupported session version ${doc.version}`);
  const base = initialState(doc.floorplan);
  return {
    ...base,
    sampling: { ...doc.sampling },
    constraints: { ...doc.constraints },
    solver: doc.solver,
    timeBudgetS: doc.time_budget_s,
    mode: doc.mode,
    manualPlacements: doc.placements.map((p) => [p[0], p[1]]),
    manualRegions: doc.placements.map(() => null),
    manualStartedAt: doc.mode === 'manual' && doc.placements.length > 0 ? now : null,
  };
}
