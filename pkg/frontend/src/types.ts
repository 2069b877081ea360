// Document shapes exchanged with the planning server. These mirror the
// JSON the API emits verbatim; the client never re-derives any of it.

export type Pt = [number, number];
export type Ring = Pt[];

export interface FloorplanDoc {
  version: number;
  units: string;
  outer: Ring;
  holes: Ring[];
}

export interface SamplingForm {
  boundary_spacing: number;
  grid_spacing: number;
  d_min: number;
  fov_y_deg: number;
  h_floor: number;
  h_ceiling: number;
}

export interface ConstraintsForm {
  d_min: number;
  d_max: number | null;
  theta_max_deg: number | null;
}

export type SolverChoice = 'greedy' | 'exact';

export interface SolutionDoc {
  version: number;
  chosen: Pt[];
  chosen_indices: number[];
  objective: number;
  status: 'optimal' | 'feasible_bound_gap' | 'infeasible';
  missed_boundary: Pt[];
  stats: Record<string, unknown>;
}

export interface PlanResponse {
  solution: SolutionDoc;
  boundary: Pt[];
  covered: number[];
  missed: number[];
  coverage_regions: Ring[];
  effective_d_min: number;
}

export interface VerifyResponse {
  boundary: Pt[];
  covered: number[];
  missed: number[];
  per_camera: number[][];
  effective_d_min: number;
}

export interface VisibilityResponse {
  region: Ring;
}

export interface ApiError {
  error: { type: string; message: string };
}

export const DEFAULT_SAMPLING: SamplingForm = {
  boundary_spacing: 0.25,
  grid_spacing: 0.5,
  d_min: 0.0,
  fov_y_deg: 150.0,
  h_floor: 1.5,
  h_ceiling: 1.3,
};

export const DEFAULT_CONSTRAINTS: ConstraintsForm = {
  d_min: 0.0,
  d_max: null,
  theta_max_deg: null,
};
