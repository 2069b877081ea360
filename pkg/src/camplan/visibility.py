"""Pairwise camera/wall-point visibility and the sparse coverage matrix.

A candidate covers a boundary point when three tests pass together:

  1. line of sight — the point lies in the candidate's visibility polygon
     (inclusive: wall points on a fan triangle's far edge count);
  2. range — d_min <= distance <= d_max;
  3. incidence — the angle between the wall point's inward normal and the
     direction toward the camera is at most theta_max.

All comparisons are inclusive with a small absolute slack so exact-boundary
configurations classify deterministically. The matrix stores sparse rows
(per boundary point) and columns (per candidate) that are exact transposes
of each other; a dense representation is never materialized.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, VisibilityBuildError
from .geometry import (
    Floorplan,
    VisibilityPolygon,
    _fan_contains,
    _sweep_fan,
    visibility_polygon,
)
from .sampling import BoundaryPoint, CandidateSite

# slack for inclusive range/angle comparisons; far below any sampling scale
_CMP_EPS = 1e-12


@dataclass(frozen=True)
class Constraints:
    """Per-pair visibility constraints. None means unbounded."""

    d_min: float = 0.0
    d_max: float | None = None
    theta_max_deg: float | None = None

    def __post_init__(self) -> None:
        if self.d_min < 0:
            raise ConfigError("d_min must be non-negative")
        if self.d_max is not None and self.d_max <= self.d_min:
            raise ConfigError("d_max must exceed d_min")
        if self.theta_max_deg is not None and not 0 < self.theta_max_deg <= 90:
            raise ConfigError("theta_max_deg must be in (0, 90]")


@dataclass(frozen=True)
class MatrixStats:
    n_boundary: int
    n_candidates: int
    pair_count: int


class VisibilityMatrix:
    """Sparse boundary-point x candidate coverage relation.

    ``rows[j]`` lists candidate indices covering boundary point j;
    ``cols[i]`` lists boundary indices candidate i covers. The two views are
    exact transposes by construction.
    """

    def __init__(
        self,
        n_boundary: int,
        n_candidates: int,
        cols: Sequence[Sequence[int]],
    ) -> None:
        if len(cols) != n_candidates:
            raise ValueError("one column per candidate required")
        col_tuples = []
        rows: list[list[int]] = [[] for _ in range(n_boundary)]
        for ci, col in enumerate(cols):
            col_t = tuple(sorted(int(j) for j in col))
            if col_t and not (0 <= col_t[0] and col_t[-1] < n_boundary):
                raise ValueError(f"column {ci} has out-of-range boundary index")
            if len(set(col_t)) != len(col_t):
                raise ValueError(f"column {ci} has duplicate boundary indices")
            col_tuples.append(col_t)
            for j in col_t:
                rows[j].append(ci)
        self.n_boundary = n_boundary
        self.n_candidates = n_candidates
        self.cols: tuple[tuple[int, ...], ...] = tuple(col_tuples)
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rows)
        self.pair_count = sum(len(c) for c in self.cols)

    def stats(self) -> MatrixStats:
        return MatrixStats(self.n_boundary, self.n_candidates, self.pair_count)


def pair_visible(
    b: BoundaryPoint,
    c: CandidateSite,
    vp: VisibilityPolygon,
    constraints: Constraints,
) -> bool:
    """Single-pair predicate; the matrix builder applies the same tests in
    vectorized form, so the two can never drift apart semantically."""
    if vp.viewpoint.distance_to(c.position) > 1e-9:
        raise ValueError("visibility polygon belongs to a different candidate")
    col = _covered_indices(
        vp.angles,
        *vp.outline_arrays(),
        c.position.x,
        c.position.y,
        np.array([b.position.x]),
        np.array([b.position.y]),
        np.array([b.normal.x]),
        np.array([b.normal.y]),
        constraints,
    )
    return bool(len(col))


def _covered_indices(
    angles: np.ndarray,
    fx: np.ndarray,
    fy: np.ndarray,
    cx: float,
    cy: float,
    bx: np.ndarray,
    by: np.ndarray,
    nx: np.ndarray,
    ny: np.ndarray,
    constraints: Constraints,
) -> np.ndarray:
    dx = bx - cx
    dy = by - cy
    dist = np.hypot(dx, dy)
    ok = dist >= constraints.d_min - _CMP_EPS
    if constraints.d_max is not None:
        ok &= dist <= constraints.d_max + _CMP_EPS
    if constraints.theta_max_deg is not None:
        cos_max = math.cos(math.radians(constraints.theta_max_deg))
        # angle between inward normal and the unit vector wall-point -> camera
        cosang = -(nx * dx + ny * dy) / np.maximum(dist, 1e-300)
        ok &= cosang >= cos_max - _CMP_EPS
    idx = np.nonzero(ok)[0]
    if len(idx):
        vis = _fan_contains(angles, fx, fy, cx, cy, bx[idx], by[idx])
        idx = idx[vis]
    return idx


def build_matrix(
    boundary: Sequence[BoundaryPoint],
    candidates: Sequence[CandidateSite],
    f: Floorplan,
    constraints: Constraints,
    workers: int = 1,
) -> VisibilityMatrix:
    """Build the coverage matrix: one visibility polygon per candidate, then
    the range/angle filters over all boundary points at once.

    ``workers > 1`` computes candidate columns concurrently; results are
    merged in candidate-index order, so the output is identical regardless
    of scheduling.
    """
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    bx = np.array([b.position.x for b in boundary])
    by = np.array([b.position.y for b in boundary])
    nx = np.array([b.normal.x for b in boundary])
    ny = np.array([b.normal.y for b in boundary])

    # touch lazy caches once so worker threads don't race to build them
    f._wall_arrays

    def column_block(block: Sequence[CandidateSite]) -> list[np.ndarray]:
        out = []
        for cand in block:
            cx, cy = cand.position.x, cand.position.y
            try:
                angles, fx, fy = _sweep_fan(cx, cy, f)
            except Exception as err:
                raise VisibilityBuildError(
                    f"candidate {cand.index} at ({cx}, {cy}): {err}"
                ) from err
            out.append(
                _covered_indices(angles, fx, fy, cx, cy, bx, by, nx, ny, constraints)
            )
        return out

    if workers == 1 or len(candidates) < 2:
        cols = column_block(candidates)
    else:
        chunk = max(1, math.ceil(len(candidates) / (workers * 8)))
        blocks = [candidates[i : i + chunk] for i in range(0, len(candidates), chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(column_block, blocks))
        cols = [col for block in results for col in block]

    return VisibilityMatrix(len(boundary), len(candidates), cols)


def build_matrix_timed(
    boundary: Sequence[BoundaryPoint],
    candidates: Sequence[CandidateSite],
    f: Floorplan,
    constraints: Constraints,
    workers: int = 1,
) -> tuple[VisibilityMatrix, float]:
    t0 = time.perf_counter()
    m = build_matrix(boundary, candidates, f, constraints, workers=workers)
    return m, time.perf_counter() - t0
