"""End-to-end planning pipeline plus the JSON document formats.

``plan`` runs floorplan → sampling → visibility matrix → solver → verified
report. ``verify_placements`` scores a manually chosen camera set against
the same sampled boundary. Documents (floorplan, plan request, solution)
are versioned JSON; ``canonical_json`` serializes them deterministically so
identical requests produce byte-identical files once timing fields are
stripped.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    FloorplanFormatError,
    PipelineInconsistencyError,
    PlacementInfeasibleError,
)
from .geometry import (
    MIN_VIEWPOINT_CLEARANCE,
    Floorplan,
    Point2,
    PointLocation,
    VisibilityPolygon,
    visibility_polygon,
)
from .sampling import (
    BoundaryPoint,
    CandidateSite,
    SamplingConfig,
    effective_d_min,
    sample_boundary,
    sample_interior,
)
from .solver import (
    CoverInstance,
    Solution,
    SolveStatus,
    solve_exact,
    solve_greedy,
    verify_cover,
)
from .visibility import Constraints, VisibilityMatrix, build_matrix, build_matrix_timed

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# excluded from determinism comparisons and canonical byte equality
TIMING_FIELDS = ("matrix_build_time", "solve_time")

SOLVER_CHOICES = ("greedy", "exact")


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


@dataclass(frozen=True)
class PlanRequest:
    """Everything `plan` needs. ``constraints.d_min`` acts as an extra floor
    on top of the sampling config's physical standoff; the pipeline always
    plans with the effective minimum range."""

    floorplan: Floorplan
    sampling: SamplingConfig = SamplingConfig()
    constraints: Constraints = Constraints()
    solver_choice: str = "exact"
    time_budget_s: float = 60.0
    workers: int | None = None  # None -> one per core, capped

    def __post_init__(self) -> None:
        if self.solver_choice not in SOLVER_CHOICES:
            raise ConfigError(
                f"solver must be one of {SOLVER_CHOICES}, got {self.solver_choice!r}"
            )
        if self.time_budget_s <= 0:
            raise ConfigError("time_budget_s must be positive")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1")
        eff = self.effective_d_min()
        if self.constraints.d_max is not None and eff >= self.constraints.d_max:
            raise ConfigError(
                f"effective minimum range {eff:.4f} must be below the maximum "
                f"range {self.constraints.d_max}"
            )

    def effective_d_min(self) -> float:
        return max(effective_d_min(self.sampling), self.constraints.d_min)

    def pair_constraints(self) -> Constraints:
        return Constraints(
            d_min=self.effective_d_min(),
            d_max=self.constraints.d_max,
            theta_max_deg=self.constraints.theta_max_deg,
        )


@dataclass(frozen=True)
class PlanStats:
    n_boundary: int
    n_candidates: int
    pair_count: int
    matrix_build_time: float
    solve_time: float


@dataclass(frozen=True)
class PlanReport:
    request: PlanRequest
    boundary: tuple[BoundaryPoint, ...]
    candidates: tuple[CandidateSite, ...]
    solution: Solution
    stats: PlanStats
    # candidate index -> clipped coverage outline, ready to draw
    coverage_geometry: dict[int, tuple[tuple[float, float], ...]]
    covered: tuple[int, ...]
    missed: tuple[int, ...]
    effective_d_min: float


def plan(req: PlanRequest) -> PlanReport:
    """Run the full pipeline and cross-check the solver's claim against a
    direct recount before returning."""
    f = req.floorplan
    constraints = req.pair_constraints()
    boundary = sample_boundary(f, req.sampling.boundary_spacing)
    candidates = sample_interior(f, req.sampling.grid_spacing, constraints.d_min)
    workers = req.workers if req.workers is not None else default_workers()
    matrix, build_time = build_matrix_timed(
        boundary, candidates, f, constraints, workers=workers
    )
    inst = CoverInstance(matrix)
    if req.solver_choice == "greedy":
        sol = solve_greedy(inst)
    else:
        sol = solve_exact(inst, time_budget_s=req.time_budget_s)

    check = verify_cover(matrix, sol.chosen)
    if set(check.missed) != set(inst.uncoverable):
        raise PipelineInconsistencyError(
            f"solver status {sol.status.value} but recount misses "
            f"{len(check.missed)} rows vs {len(inst.uncoverable)} uncoverable"
        )
    recount = sum(len(r) for r in matrix.rows)
    if recount != matrix.pair_count:
        raise PipelineInconsistencyError(
            f"pair_count {matrix.pair_count} != row recount {recount}"
        )

    regions: dict[int, tuple[tuple[float, float], ...]] = {}
    for c in sol.chosen:
        vp = visibility_polygon(candidates[c].position, f)
        regions[c] = tuple(coverage_region(vp, constraints.d_max))

    stats = PlanStats(
        n_boundary=len(boundary),
        n_candidates=len(candidates),
        pair_count=matrix.pair_count,
        matrix_build_time=build_time,
        solve_time=sol.diagnostics.solve_time,
    )
    return PlanReport(
        request=req,
        boundary=tuple(boundary),
        candidates=tuple(candidates),
        solution=sol,
        stats=stats,
        coverage_geometry=regions,
        covered=check.covered,
        missed=check.missed,
        effective_d_min=constraints.d_min,
    )


# ---------------------------------------------------------------------------
# manual-placement verification

@dataclass(frozen=True)
class VerifyReport:
    boundary: tuple[BoundaryPoint, ...]
    placements: tuple[Point2, ...]
    per_camera: dict[int, tuple[int, ...]]
    covered: tuple[int, ...]
    missed: tuple[int, ...]
    effective_d_min: float


def verify_placements(
    f: Floorplan,
    placements: Sequence[Point2 | Sequence[float]],
    sampling: SamplingConfig = SamplingConfig(),
    constraints: Constraints = Constraints(),
    workers: int = 1,
) -> VerifyReport:
    """Score manual camera positions against the sampled boundary.

    Placements must be strictly inside the floorplan with wall clearance;
    a bad one raises PlacementInfeasibleError naming its index.
    """
    eff = max(effective_d_min(sampling), constraints.d_min)
    pair_constraints = Constraints(
        d_min=eff, d_max=constraints.d_max, theta_max_deg=constraints.theta_max_deg
    )
    if pair_constraints.d_max is not None and eff >= pair_constraints.d_max:
        raise ConfigError(
            f"effective minimum range {eff:.4f} must be below the maximum "
            f"range {pair_constraints.d_max}"
        )
    boundary = sample_boundary(f, sampling.boundary_spacing)
    sites: list[CandidateSite] = []
    for i, raw in enumerate(placements):
        p = raw if isinstance(raw, Point2) else Point2(float(raw[0]), float(raw[1]))
        clear = float(f.clearance(p.x, p.y))
        if f.locate(p) is not PointLocation.INSIDE or clear <= MIN_VIEWPOINT_CLEARANCE:
            raise PlacementInfeasibleError(
                f"placement {i} at ({p.x}, {p.y}) is not strictly inside the floorplan"
            )
        sites.append(CandidateSite(index=i, position=p, clearance=clear))
    matrix = build_matrix(boundary, sites, f, pair_constraints, workers=workers)
    check = verify_cover(matrix, range(len(sites)))
    return VerifyReport(
        boundary=tuple(boundary),
        placements=tuple(s.position for s in sites),
        per_camera={i: matrix.cols[i] for i in range(len(sites))},
        covered=check.covered,
        missed=check.missed,
        effective_d_min=eff,
    )


# ---------------------------------------------------------------------------
# coverage region: visibility fan clipped to the max-range disc

def coverage_region(
    vp: VisibilityPolygon,
    d_max: float | None = None,
    arc_step_deg: float = 6.0,
) -> list[tuple[float, float]]:
    """Outline of the fan intersected with the radius-``d_max`` disc.

    Where the fan reaches beyond the disc the outline follows the circle,
    sampled every ``arc_step_deg`` degrees. With no range limit the fan
    outline is returned unchanged. The result is a CCW ring suitable for
    direct rendering; min-range and incidence limits are per-wall-point
    effects and are not part of this region.
    """
    fx, fy = vp.outline_arrays()
    px, py = vp.viewpoint.x, vp.viewpoint.y
    if d_max is None:
        return [(float(x), float(y)) for x, y in zip(fx, fy)]
    r = float(d_max)
    if r <= 0:
        raise ConfigError("d_max must be positive")
    tol = 1e-9
    dist = np.hypot(fx - px, fy - py)
    if np.all(dist <= r + tol):
        return [(float(x), float(y)) for x, y in zip(fx, fy)]

    step = math.radians(arc_step_deg)
    pts: list[tuple[float, float]] = []

    def emit(x: float, y: float) -> None:
        if pts and abs(pts[-1][0] - x) < tol and abs(pts[-1][1] - y) < tol:
            return
        pts.append((float(x), float(y)))

    def emit_arc(a0: float, a1: float) -> None:
        # interior points of the CCW arc from a0 to a1 at radius r
        delta = (a1 - a0) % (2.0 * math.pi)
        if delta <= 1e-12:
            return
        k = max(0, math.ceil(delta / step) - 1)
        for j in range(1, k + 1):
            a = a0 + j * delta / (k + 1)
            emit(px + r * math.cos(a), py + r * math.sin(a))

    n = len(fx)
    inside = dist <= r + tol
    pending_exit: float | None = None  # angle where the outline left the disc
    first_entry: float | None = None  # set when the walk starts outside

    for i in range(n):
        j = (i + 1) % n
        ax, ay, bx, by = fx[i], fy[i], fx[j], fy[j]
        if inside[i]:
            emit(ax, ay)
        # the in-disc portion of edge a->b is a single t-interval (distance
        # to the center is unimodal along a line)
        dx, dy = bx - ax, by - ay
        qa = dx * dx + dy * dy
        if qa <= 1e-30:
            continue
        ex, ey = ax - px, ay - py
        qb = 2.0 * (ex * dx + ey * dy)
        qc = ex * ex + ey * ey - r * r
        disc = qb * qb - 4.0 * qa * qc
        if disc <= 0.0:
            continue  # edge never dips inside the disc
        root = math.sqrt(disc)
        lo = max((-qb - root) / (2.0 * qa), 0.0)
        hi = min((-qb + root) / (2.0 * qa), 1.0)
        if hi <= lo + 1e-12:
            continue
        if not inside[i]:
            x, y = ax + lo * dx, ay + lo * dy
            entry_angle = math.atan2(y - py, x - px)
            if pending_exit is not None:
                emit_arc(pending_exit, entry_angle)
                pending_exit = None
            elif first_entry is None:
                first_entry = entry_angle
            emit(x, y)
        if not inside[j]:
            x, y = ax + hi * dx, ay + hi * dy
            emit(x, y)
            pending_exit = math.atan2(y - py, x - px)

    if pending_exit is not None and first_entry is not None:
        emit_arc(pending_exit, first_entry)

    if not pts:
        # every wall is beyond reach: the region is the full disc
        k = max(8, math.ceil(2.0 * math.pi / step))
        return [
            (px + r * math.cos(2.0 * math.pi * j / k),
             py + r * math.sin(2.0 * math.pi * j / k))
            for j in range(k)
        ]
    if len(pts) > 1 and abs(pts[0][0] - pts[-1][0]) < tol and abs(pts[0][1] - pts[-1][1]) < tol:
        pts.pop()
    return pts


def coverage_region_at(
    f: Floorplan,
    point: Point2 | Sequence[float],
    constraints: Constraints = Constraints(),
) -> list[tuple[float, float]]:
    """Coverage region for an arbitrary viewpoint (used by the service)."""
    vp = visibility_polygon(point, f)
    return coverage_region(vp, constraints.d_max)


# ---------------------------------------------------------------------------
# documents

def floorplan_document(f: Floorplan) -> dict[str, Any]:
    return {
        "version": SCHEMA_VERSION,
        "units": "meters",
        "outer": [[v.x, v.y] for v in f.outer],
        "holes": [[[v.x, v.y] for v in ring] for ring in f.holes],
    }


def _read_source(source: str | Path, kind: str) -> Any:
    """Accept a path, a Path, a JSON string, or an already-parsed dict."""
    if isinstance(source, Path):
        text = source.read_text()
        where = str(source)
    else:
        stripped = source.lstrip()
        if stripped.startswith("{"):
            text, where = source, f"<inline {kind}>"
        else:
            p = Path(source)
            if not p.exists():
                raise FloorplanFormatError(f"{kind} file not found: {source}")
            text, where = p.read_text(), source
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise FloorplanFormatError(
            f"{where}: invalid JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from err


def _ring_from(raw: Any, field: str) -> list[tuple[float, float]]:
    if not isinstance(raw, list) or len(raw) < 3:
        raise FloorplanFormatError(f"'{field}' must be a list of at least 3 [x, y] pairs")
    ring = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise FloorplanFormatError(f"'{field}[{i}]' must be an [x, y] number pair")
        ring.append((float(item[0]), float(item[1])))
    return ring


def load_floorplan(source: Floorplan | dict | str | Path) -> Floorplan:
    """Parse and validate a floorplan document (dict, JSON text, or path).

    Geometry violations raise InvalidGeometryError naming the invariant;
    malformed documents raise FloorplanFormatError with field context.
    Orientation fixes are applied silently to the geometry but logged.
    """
    if isinstance(source, Floorplan):
        return source
    doc = source if isinstance(source, dict) else _read_source(source, "floorplan")
    if not isinstance(doc, dict):
        raise FloorplanFormatError("floorplan document root must be an object")
    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise FloorplanFormatError(f"unsupported floorplan version: {version!r}")
    units = doc.get("units", "meters")
    if units != "meters":
        raise FloorplanFormatError(f"unsupported units: {units!r} (only 'meters')")
    unknown = set(doc) - {"version", "units", "outer", "holes"}
    if unknown:
        raise FloorplanFormatError(f"unknown floorplan fields: {sorted(unknown)}")
    outer = _ring_from(doc.get("outer"), "outer")
    holes_raw = doc.get("holes", [])
    if not isinstance(holes_raw, list):
        raise FloorplanFormatError("'holes' must be a list of rings")
    holes = [_ring_from(h, f"holes[{i}]") for i, h in enumerate(holes_raw)]
    f = Floorplan(outer, holes)
    for note in f.normalization_notes:
        log.warning("floorplan: %s", note)
    return f


def _reject_unknown(payload: dict, allowed: Iterable[str], what: str) -> None:
    unknown = set(payload) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown {what} fields: {sorted(unknown)}")


def _number(payload: dict, key: str, default: float | None) -> float | None:
    v = payload.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"'{key}' must be a number, got {v!r}")
    return float(v)


def sampling_from_payload(payload: dict) -> SamplingConfig:
    _reject_unknown(
        payload,
        ("boundary_spacing", "grid_spacing", "d_min", "fov_y_deg", "h_floor", "h_ceiling"),
        "sampling",
    )
    defaults = SamplingConfig()
    return SamplingConfig(
        boundary_spacing=_number(payload, "boundary_spacing", defaults.boundary_spacing),
        grid_spacing=_number(payload, "grid_spacing", defaults.grid_spacing),
        d_min=_number(payload, "d_min", defaults.d_min),
        fov_y_deg=_number(payload, "fov_y_deg", defaults.fov_y_deg),
        h_floor=_number(payload, "h_floor", defaults.h_floor),
        h_ceiling=_number(payload, "h_ceiling", defaults.h_ceiling),
    )


def constraints_from_payload(payload: dict) -> Constraints:
    _reject_unknown(payload, ("d_min", "d_max", "theta_max_deg"), "constraints")
    return Constraints(
        d_min=_number(payload, "d_min", 0.0),
        d_max=_number(payload, "d_max", None),
        theta_max_deg=_number(payload, "theta_max_deg", None),
    )


def parse_plan_request(payload: dict) -> PlanRequest:
    """Build a PlanRequest from a request document (shared by CLI and API)."""
    if not isinstance(payload, dict):
        raise ConfigError("plan request must be an object")
    _reject_unknown(
        payload,
        ("floorplan", "sampling", "constraints", "solver", "time_budget_s", "workers"),
        "plan request",
    )
    if "floorplan" not in payload:
        raise ConfigError("plan request missing 'floorplan'")
    f = load_floorplan(payload["floorplan"])
    sampling = sampling_from_payload(payload.get("sampling", {}) or {})
    constraints = constraints_from_payload(payload.get("constraints", {}) or {})
    solver = payload.get("solver", "exact")
    budget = _number(payload, "time_budget_s", 60.0)
    workers = payload.get("workers")
    if workers is not None:
        if isinstance(workers, bool) or not isinstance(workers, int):
            raise ConfigError(f"'workers' must be an integer, got {workers!r}")
    return PlanRequest(
        floorplan=f,
        sampling=sampling,
        constraints=constraints,
        solver_choice=solver,
        time_budget_s=budget,
        workers=workers,
    )


def solution_document(report: PlanReport) -> dict[str, Any]:
    sol = report.solution
    cands = report.candidates
    return {
        "version": SCHEMA_VERSION,
        "chosen": [[cands[c].position.x, cands[c].position.y] for c in sol.chosen],
        "chosen_indices": list(sol.chosen),
        "objective": sol.objective,
        "status": sol.status.value,
        "missed_boundary": list(report.missed),
        "stats": {
            "n_boundary": report.stats.n_boundary,
            "n_candidates": report.stats.n_candidates,
            "pair_count": report.stats.pair_count,
            "matrix_build_time": report.stats.matrix_build_time,
            "solve_time": report.stats.solve_time,
            "nodes_explored": sol.diagnostics.nodes_explored,
            "reductions_applied": dict(sol.diagnostics.reductions_applied),
            "effective_d_min": report.effective_d_min,
        },
    }


def _strip_timing(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in TIMING_FIELDS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def canonical_json(doc: dict, drop_timing: bool = False) -> str:
    """Deterministic serialization: sorted keys, fixed formatting. With
    ``drop_timing`` the result is byte-comparable across runs."""
    if drop_timing:
        doc = _strip_timing(doc)
    return json.dumps(doc, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def write_solution(report: PlanReport, path: str | Path) -> None:
    Path(path).write_text(canonical_json(solution_document(report)))


def load_solution(source: dict | str | Path) -> dict[str, Any]:
    """Re-import a solution document; returns the parsed, checked dict."""
    doc = source if isinstance(source, dict) else _read_source(source, "solution")
    if not isinstance(doc, dict):
        raise FloorplanFormatError("solution document root must be an object")
    if doc.get("version") != SCHEMA_VERSION:
        raise FloorplanFormatError(f"unsupported solution version: {doc.get('version')!r}")
    for key in ("chosen", "chosen_indices", "objective", "status"):
        if key not in doc:
            raise FloorplanFormatError(f"solution document missing '{key}'")
    if len(doc["chosen"]) != len(doc["chosen_indices"]) or doc["objective"] != len(doc["chosen"]):
        raise FloorplanFormatError("solution document is internally inconsistent")
    return doc


def load_placements(source: dict | str | Path) -> list[tuple[float, float]]:
    """Read manual placements: either {"placements": [[x,y],...]} or a
    solution document (its "chosen" positions)."""
    doc = source if isinstance(source, dict) else _read_source(source, "placements")
    if not isinstance(doc, dict):
        raise FloorplanFormatError("placements document root must be an object")
    raw = doc.get("placements", doc.get("chosen"))
    if raw is None:
        raise FloorplanFormatError("placements document needs 'placements' or 'chosen'")
    if not isinstance(raw, list):
        raise FloorplanFormatError("'placements' must be a list of [x, y] pairs")
    out = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise FloorplanFormatError(f"'placements[{i}]' must be an [x, y] number pair")
        out.append((float(item[0]), float(item[1])))
    return out
