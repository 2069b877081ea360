// Thin HTTP client plus the request-sequencing rule: every channel
// (plan, verify, visibility) applies only the response of the most
// recently issued request; anything slower is ignored on arrival.

import type {
  ApiError,
  ConstraintsForm,
  FloorplanDoc,
  PlanResponse,
  Pt,
  SamplingForm,
  SolverChoice,
  VerifyResponse,
  VisibilityResponse,
} from './types.js';

export class HttpError extends Error {
  constructor(
    public readonly type: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = 'HttpError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function constraintsBody(c: ConstraintsForm): Record<string, unknown> {
  return { d_min: c.d_min, d_max: c.d_max, theta_max_deg: c.theta_max_deg };
}

export interface PlanBody {
  floorplan: FloorplanDoc;
  sampling: SamplingForm;
  constraints: ConstraintsForm;
  solver: SolverChoice;
  time_budget_s: number;
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
    private readonly base = '',
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      let type = 'HttpError';
      let message = `${resp.status} ${resp.statusText}`;
      try {
        const err = (await resp.json()) as ApiError;
        type = err.error.type;
        message = err.error.message;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new HttpError(type, message, resp.status);
    }
    return (await resp.json()) as T;
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await this.fetchFn(this.base + '/api/health');
    if (!resp.ok) throw new HttpError('HttpError', `${resp.status}`, resp.status);
    return (await resp.json()) as { status: string; version: string };
  }

  plan(body: PlanBody): Promise<PlanResponse> {
    return this.post<PlanResponse>('/api/plan', {
      floorplan: body.floorplan,
      sampling: body.sampling,
      constraints: constraintsBody(body.constraints),
      solver: body.solver,
      time_budget_s: body.time_budget_s,
    });
  }

  verify(
    floorplan: FloorplanDoc,
    placements: Pt[],
    sampling: SamplingForm,
    constraints: ConstraintsForm,
  ): Promise<VerifyResponse> {
    return this.post<VerifyResponse>('/api/verify', {
      floorplan,
      placements,
      sampling,
      constraints: constraintsBody(constraints),
    });
  }

  visibility(
    floorplan: FloorplanDoc,
    point: Pt,
    constraints: ConstraintsForm,
  ): Promise<VisibilityResponse> {
    return this.post<VisibilityResponse>('/api/visibility', {
      floorplan,
      point,
      constraints: constraintsBody(constraints),
    });
  }
}

// monotonically increasing sequence numbers; a response counts only if
// no newer request was issued on the same channel in the meantime
export class RequestSequencer {
  private issued = 0;

  next(): number {
    return ++this.issued;
  }

  isCurrent(seq: number): boolean {
    return seq === this.issued;
  }
}

// run an async operation under latest-wins semantics: superseded results
// (and superseded failures) resolve to null instead of surfacing
export class LatestOnly {
  private readonly seq = new RequestSequencer();

  async run<T>(op: () => Promise<T>): Promise<T | null> {
    const id = this.seq.next();
    try {
      const out = await op();
      return this.seq.isCurrent(id) ? out : null;
    } catch (err) {
      if (this.seq.isCurrent(id)) throw err;
      return null;
    }
  }
}
