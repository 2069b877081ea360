"""Discretization: wall sample points and interior candidate sites.

The camera is a full-sphere unit mounted at a fixed height, so the 2D
problem needs one derived quantity from the vertical geometry: the minimum
horizontal standoff at which the vertical field of view still reaches both
floor and ceiling, cot(fov_y/2) * h with h the larger of the two mounting
distances. The effective per-pair minimum range is that standoff or the
user clearance, whichever is larger.

Boundary points sit at the centers of equal sub-intervals of each wall
(never at vertices) and carry the wall's inward unit normal. Candidate
sites come from an axis-aligned grid anchored at the bounding-box minimum
corner, keeping only points strictly inside with wall clearance >= d_min.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InfeasibleSamplingError
from .geometry import EPS_GEOM, MIN_VIEWPOINT_CLEARANCE, Floorplan, Point2


@dataclass(frozen=True)
class SamplingConfig:
    """Sampling and camera-geometry parameters (meters / degrees)."""

    boundary_spacing: float = 0.25
    grid_spacing: float = 0.5
    d_min: float = 0.0
    fov_y_deg: float = 150.0
    h_floor: float = 1.5
    h_ceiling: float = 1.3

    def __post_init__(self) -> None:
        if self.boundary_spacing <= 0:
            raise ConfigError("boundary_spacing must be positive")
        if self.grid_spacing <= 0:
            raise ConfigError("grid_spacing must be positive")
        if self.d_min < 0:
            raise ConfigError("d_min must be non-negative")
        if not 0 < self.fov_y_deg < 180:
            raise ConfigError("fov_y_deg must be in (0, 180)")
        if self.h_floor <= 0 or self.h_ceiling <= 0:
            raise ConfigError("camera heights must be positive")


@dataclass(frozen=True)
class BoundaryPoint:
    """Wall sample: position on the wall plus inward unit normal."""

    index: int
    position: Point2
    normal: Point2
    wall_id: int


@dataclass(frozen=True)
class CandidateSite:
    """Interior grid point eligible to hold a camera."""

    index: int
    position: Point2
    clearance: float


def standoff_from_fov(fov_y_deg: float, h_floor: float, h_ceiling: float) -> float:
    """Minimum horizontal distance to a wall that keeps the wall's full
    height inside the vertical field of view: cot(fov_y/2) * h, with h the
    larger of the camera's distances to floor and ceiling."""
    if not 0 < fov_y_deg < 180:
        raise ConfigError("fov_y_deg must be in (0, 180)")
    if h_floor <= 0 or h_ceiling <= 0:
        raise ConfigError("camera heights must be positive")
    h = max(h_floor, h_ceiling)
    return h / math.tan(math.radians(fov_y_deg) / 2.0)


def effective_d_min(config: SamplingConfig) -> float:
    """Per-pair minimum range: the fov standoff or the user d_min, whichever
    is larger."""
    return max(
        standoff_from_fov(config.fov_y_deg, config.h_floor, config.h_ceiling),
        config.d_min,
    )


def sample_boundary(f: Floorplan, spacing: float) -> list[BoundaryPoint]:
    """Sample every wall at the centers of equal sub-intervals.

    Each wall of length L gets max(1, round(L / spacing)) points (halves
    round up), so every wall is represented and no point ever falls on a
    vertex. Indices run wall by wall in floorplan order: outer ring first,
    then each hole ring.
    """
    if spacing <= 0:
        raise ConfigError("spacing must be positive")
    points: list[BoundaryPoint] = []
    for wall_id, seg in enumerate(f.walls):
        length = seg.length()
        n = max(1, math.floor(length / spacing + 0.5))
        ax, ay = seg.a.x, seg.a.y
        ex, ey = seg.b.x - ax, seg.b.y - ay
        # interior lies to the left of every directed wall (outer CCW, holes CW)
        inv = 1.0 / length
        nx, ny = -ey * inv, ex * inv
        for k in range(n):
            t = (k + 0.5) / n
            points.append(
                BoundaryPoint(
                    index=len(points),
                    position=Point2(ax + t * ex, ay + t * ey),
                    normal=Point2(nx, ny),
                    wall_id=wall_id,
                )
            )
    return points


def sample_interior(f: Floorplan, grid_spacing: float, d_min: float) -> list[CandidateSite]:
    """Grid candidate sites anchored at the bounding-box minimum corner.

    Keeps grid points strictly inside the floorplan with wall clearance at
    least d_min (and never below the sweep's own viewpoint clearance floor).
    Raises InfeasibleSamplingError when nothing qualifies — callers surface
    that as an infeasible-sampling report, not as an empty success.
    """
    if grid_spacing <= 0:
        raise ConfigError("grid_spacing must be positive")
    if d_min < 0:
        raise ConfigError("d_min must be non-negative")
    lo, hi = f.bbox()
    nx = int(math.floor((hi.x - lo.x) / grid_spacing + EPS_GEOM)) + 1
    ny = int(math.floor((hi.y - lo.y) / grid_spacing + EPS_GEOM)) + 1
    xs = lo.x + grid_spacing * np.arange(nx)
    ys = lo.y + grid_spacing * np.arange(ny)
    gx, gy = np.meshgrid(xs, ys)  # row-major: y varies slowest
    gx = gx.ravel()
    gy = gy.ravel()

    clear = f.clearance(gx, gy)
    min_clear = max(d_min, MIN_VIEWPOINT_CLEARANCE)
    keep = clear >= min_clear
    if np.any(keep):
        keep[keep] &= f.locate_many(gx[keep], gy[keep])
    idx = np.nonzero(keep)[0]
    sites = [
        CandidateSite(
            index=i,
            position=Point2(float(gx[j]), float(gy[j])),
            clearance=float(clear[j]),
        )
        for i, j in enumerate(idx)
    ]
    if not sites:
        raise InfeasibleSamplingError(
            f"no interior grid point at spacing {grid_spacing} has clearance "
            f">= {d_min} — the floorplan is too tight for these settings"
        )
    return sites
