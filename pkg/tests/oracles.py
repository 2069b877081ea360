"""Independent reference implementations used to check the package.

Nothing in here imports the package's sweep/visibility code paths: the area
oracle is a dense uniform ray cast, the occlusion oracle is a direct
segment-vs-wall proper-intersection test, and the matrix oracle combines the
occlusion oracle with explicit range/angle predicates. Agreement between
these and the package is the point of the tests, so keep them independent.
"""

from __future__ import annotations

import math

import numpy as np

ORACLE_EPS = 1e-9


def floorplan_wall_arrays(f):
    """Wall endpoints as flat arrays (outer ring first, then holes)."""
    ax, ay, bx, by = [], [], [], []
    rings = [f.outer] + list(f.holes)
    for ring in rings:
        n = len(ring)
        for i in range(n):
            p, q = ring[i], ring[(i + 1) % n]
            ax.append(p.x)
            ay.append(p.y)
            bx.append(q.x)
            by.append(q.y)
    return (np.array(ax), np.array(ay), np.array(bx), np.array(by))


def ray_cast_area(f, px: float, py: float, n_rays: int = 100_000) -> float:
    """Visibility area by casting n uniformly spaced rays, summing sector areas.

    Sector k spans 2*pi/n around its ray; its area is t_k^2 * pi / n where
    t_k is the distance to the nearest wall hit.
    """
    ax, ay, bx, by = floorplan_wall_arrays(f)
    ex, ey = bx - ax, by - ay
    seg_len = np.hypot(ex, ey)
    theta = (np.arange(n_rays) + 0.5) * (2.0 * math.pi / n_rays)
    dx = np.cos(theta)
    dy = np.sin(theta)
    apx = ax - px
    apy = ay - py
    t_num = apx * ey - apy * ex  # cross(a-p, e), per segment
    t_min = np.full(n_rays, np.inf)
    # chunk over rays to bound memory at n_rays * n_walls
    chunk = max(1, 4_000_000 // max(1, len(ax)))
    for lo in range(0, n_rays, chunk):
        hi = min(n_rays, lo + chunk)
        d_x = dx[lo:hi, None]
        d_y = dy[lo:hi, None]
        denom = d_x * ey[None, :] - d_y * ex[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = t_num[None, :] / denom
            s = (apx[None, :] * d_y - apy[None, :] * d_x) / denom
        s_eps = ORACLE_EPS / seg_len
        ok = (
            (np.abs(denom) > 1e-14 * seg_len[None, :])
            & (s >= -s_eps[None, :])
            & (s <= 1.0 + s_eps[None, :])
            & (t > ORACLE_EPS)
        )
        t = np.where(ok, t, np.inf)
        t_min[lo:hi] = t.min(axis=1)
    assert np.all(np.isfinite(t_min)), "oracle ray escaped the floorplan"
    return float(np.sum(t_min * t_min) * math.pi / n_rays)


def segment_blocked(f, px: float, py: float, qx: float, qy: float) -> bool:
    """True when the open segment p->q properly crosses any wall.

    Proper means the interiors cross transversally: each segment's endpoints
    lie strictly on opposite sides of the other's carrier line. Endpoint
    contact and collinear grazing do not block.
    """
    ax, ay, bx, by = floorplan_wall_arrays(f)
    return bool(
        _blocked_many(
            ax, ay, bx, by,
            np.array([float(px)]), np.array([float(py)]),
            np.array([float(qx)]), np.array([float(qy)]),
        )[0]
    )


def _blocked_many(ax, ay, bx, by, px, py, qx, qy):
    """px/py/qx/qy are equal-length arrays of sight endpoints."""
    ex, ey = bx - ax, by - ay
    wall_len = np.hypot(ex, ey)
    sx = qx - px
    sy = qy - py
    sight_len = np.hypot(sx, sy)

    # side of wall endpoints relative to the sight line, normalized to distance
    d_a = (ax[None, :] - px[:, None]) * sy[:, None] - (ay[None, :] - py[:, None]) * sx[:, None]
    d_b = (bx[None, :] - px[:, None]) * sy[:, None] - (by[None, :] - py[:, None]) * sx[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        d_a = d_a / sight_len[:, None]
        d_b = d_b / sight_len[:, None]
    # side of sight endpoints relative to each wall line
    d_p = (px[:, None] - ax[None, :]) * ey[None, :] - (py[:, None] - ay[None, :]) * ex[None, :]
    d_q = (qx[:, None] - ax[None, :]) * ey[None, :] - (qy[:, None] - ay[None, :]) * ex[None, :]
    d_p = d_p / wall_len[None, :]
    d_q = d_q / wall_len[None, :]

    strict = ORACLE_EPS
    crossing = (
        (d_a * d_b < 0)
        & (np.abs(d_a) > strict)
        & (np.abs(d_b) > strict)
        & (d_p * d_q < 0)
        & (np.abs(d_p) > strict)
        & (np.abs(d_q) > strict)
    )
    return crossing.any(axis=1)


def visible_pairs_matrix(f, boundary, candidates, d_min, d_max, theta_max_deg):
    """Brute-force all-pairs visibility: occlusion + range + incidence angle.

    Returns a list of sorted boundary-index tuples, one per candidate, using
    the same inclusive comparisons the package documents.
    """
    ax, ay, bx, by = floorplan_wall_arrays(f)
    n_b = len(boundary)
    tx = np.array([b.position.x for b in boundary])
    ty = np.array([b.position.y for b in boundary])
    nx = np.array([b.normal.x for b in boundary])
    ny = np.array([b.normal.y for b in boundary])
    cos_max = None
    if theta_max_deg is not None:
        cos_max = math.cos(math.radians(theta_max_deg))
    cols = []
    for cand in candidates:
        cx, cy = cand.position.x, cand.position.y
        dx = tx - cx
        dy = ty - cy
        dist = np.hypot(dx, dy)
        ok = dist >= d_min - 1e-12
        if d_max is not None:
            ok &= dist <= d_max + 1e-12
        if cos_max is not None:
            cosang = -(nx * dx + ny * dy) / np.maximum(dist, 1e-300)
            ok &= cosang >= cos_max - 1e-12
        idx = np.nonzero(ok)[0]
        if len(idx):
            blocked = _blocked_many(
                ax, ay, bx, by,
                np.full(len(idx), cx), np.full(len(idx), cy),
                tx[idx], ty[idx],
            )
            idx = idx[~blocked]
        cols.append(tuple(int(i) for i in idx))
    return cols


def min_vertex_clearance_of_sight(f, px, py, qx, qy) -> float:
    """Distance from the sight segment p->q to the nearest wall vertex.

    Used to discard tolerance-band pairs when comparing sees() with the
    occlusion oracle: a sight line grazing a vertex is exactly the
    configuration where the two are allowed to disagree.
    """
    ax, ay, _, _ = floorplan_wall_arrays(f)
    sx, sy = qx - px, qy - py
    ll = sx * sx + sy * sy
    if ll == 0:
        return math.inf
    t = ((ax - px) * sx + (ay - py) * sy) / ll
    t = np.clip(t, 0.0, 1.0)
    d = np.hypot(px + t * sx - ax, py + t * sy - ay)
    return float(d.min())


def blocked_from(f, px: float, py: float, qx, qy):
    """Vectorized segment_blocked for one viewpoint against target arrays."""
    ax, ay, bx, by = floorplan_wall_arrays(f)
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    return _blocked_many(
        ax, ay, bx, by,
        np.full(len(qx), float(px)), np.full(len(qx), float(py)),
        qx, qy,
    )


def vertex_clearances_from(f, px: float, py: float, qx, qy):
    """Vectorized min_vertex_clearance_of_sight for one viewpoint against
    target arrays: per target, the distance from the sight segment to the
    nearest wall vertex."""
    ax, ay, _, _ = floorplan_wall_arrays(f)
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    sx = qx - px
    sy = qy - py
    ll = np.maximum(sx * sx + sy * sy, 1e-300)
    t = ((ax[None, :] - px) * sx[:, None] + (ay[None, :] - py) * sy[:, None]) / ll[:, None]
    t = np.clip(t, 0.0, 1.0)
    d = np.hypot(px + t * sx[:, None] - ax[None, :], py + t * sy[:, None] - ay[None, :])
    return d.min(axis=1)
