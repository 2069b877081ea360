"""Planar geometry: floorplans, point/segment predicates, visibility polygons.

All coordinates are in meters. The floorplan interior is the region enclosed
by the outer ring minus the hole rings; walls are the ring edges. Visibility
is computed with a rotational sweep around an interior viewpoint: rays are
cast at every wall-vertex angle plus two auxiliary rays offset by
``EPS_ANGLE`` on either side (this resolves the depth jump at reflex
corners), and the nearest hits, ordered by angle, form a triangle fan that
is star-shaped with respect to the viewpoint.

Design notes:
  - predicates share one geometric tolerance (EPS_GEOM) so containment,
    intersection, and sweep results stay mutually consistent;
  - the fan containment test is inclusive: points on walls and on window
    edges count as visible, which is what boundary coverage needs;
  - bulk work (ray batches, distance fields) goes through numpy, scalar
    entry points wrap the same code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidGeometryError, PlacementInfeasibleError

EPS_GEOM = 1e-9  # meters; orientation/containment tolerance
EPS_ANGLE = 1e-7  # radians; auxiliary ray offset around vertex angles

# Minimum clearance a sweep viewpoint must keep from every wall. Slightly
# above EPS_GEOM so the ray origin never sits inside the intersection
# tolerance band of a wall.
MIN_VIEWPOINT_CLEARANCE = 10 * EPS_GEOM


class PointLocation(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


class SegmentRelation(Enum):
    PROPER = "proper"  # interiors cross transversally
    TOUCHING = "touching"  # endpoint contact or collinear overlap
    NONE = "none"


@dataclass(frozen=True)
class Point2:
    """Point in the floor plane (meters)."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidGeometryError(
                f"non-finite coordinate ({self.x!r}, {self.y!r})"
            )

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Segment:
    """Directed wall segment from a to b."""

    a: Point2
    b: Point2

    def __post_init__(self) -> None:
        if self.a.distance_to(self.b) <= EPS_GEOM:
            raise InvalidGeometryError(
                f"degenerate segment at ({self.a.x}, {self.a.y})"
            )

    def length(self) -> float:
        return self.a.distance_to(self.b)


def _as_point(value: Point2 | Sequence[float]) -> Point2:
    if isinstance(value, Point2):
        return value
    if isinstance(value, (tuple, list)) and len(value) == 2:
        return Point2(float(value[0]), float(value[1]))
    raise InvalidGeometryError(f"not a point: {value!r}")


def signed_area(ring: Sequence[Point2 | Sequence[float]]) -> float:
    """Shoelace area of a ring; positive for counter-clockwise order."""
    if len(ring) < 3:
        raise InvalidGeometryError("ring needs at least 3 vertices")
    pts = [_as_point(p) for p in ring]
    acc = 0.0
    for i, p in enumerate(pts):
        q = pts[(i + 1) % len(pts)]
        acc += p.x * q.y - q.x * p.y
    return 0.5 * acc


def _point_segment_distance(px: float, py: float, s: Segment) -> float:
    ax, ay, bx, by = s.a.x, s.a.y, s.b.x, s.b.y
    ex, ey = bx - ax, by - ay
    t = ((px - ax) * ex + (py - ay) * ey) / (ex * ex + ey * ey)
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * ex), py - (ay + t * ey))


def segments_intersect(s1: Segment, s2: Segment) -> SegmentRelation:
    """Classify the relation of two segments.

    TOUCHING covers endpoint contact and collinear overlap: within EPS_GEOM
    some endpoint of one segment lies on the other. PROPER means the open
    interiors cross transversally. Anything else is NONE.
    """
    contact = min(
        _point_segment_distance(s1.a.x, s1.a.y, s2),
        _point_segment_distance(s1.b.x, s1.b.y, s2),
        _point_segment_distance(s2.a.x, s2.a.y, s1),
        _point_segment_distance(s2.b.x, s2.b.y, s1),
    )
    if contact <= EPS_GEOM:
        return SegmentRelation.TOUCHING

    def side(seg: Segment, p: Point2) -> float:
        # signed distance of p from seg's carrier line
        ex, ey = seg.b.x - seg.a.x, seg.b.y - seg.a.y
        return ((p.x - seg.a.x) * ey - (p.y - seg.a.y) * ex) / seg.length()

    d1 = side(s2, s1.a)
    d2 = side(s2, s1.b)
    d3 = side(s1, s2.a)
    d4 = side(s1, s2.b)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return SegmentRelation.PROPER
    return SegmentRelation.NONE


def _clean_ring(
    raw: Sequence[Point2 | Sequence[float]], label: str
) -> list[Point2]:
    pts = [_as_point(p) for p in raw]
    if len(pts) >= 2 and pts[0].distance_to(pts[-1]) <= EPS_GEOM:
        pts = pts[:-1]  # accept explicitly closed rings
    # drop consecutive duplicates
    out: list[Point2] = []
    for p in pts:
        if not out or out[-1].distance_to(p) > EPS_GEOM:
            out.append(p)
    if len(out) >= 2 and out[0].distance_to(out[-1]) <= EPS_GEOM:
        out.pop()
    if len(out) < 3:
        raise InvalidGeometryError(f"{label}: fewer than 3 distinct vertices")

    # merge collinear runs; reject fold-back spikes (direction reversal)
    merged: list[Point2] = []
    n = len(out)
    for i in range(n):
        prev = out[(i - 1) % n]
        cur = out[i]
        nxt = out[(i + 1) % n]
        ux, uy = cur.x - prev.x, cur.y - prev.y
        vx, vy = nxt.x - cur.x, nxt.y - cur.y
        cross = ux * vy - uy * vx
        lu = math.hypot(ux, uy)
        lv = math.hypot(vx, vy)
        if abs(cross) <= EPS_GEOM * max(lu, lv):
            if ux * vx + uy * vy < 0:
                raise InvalidGeometryError(
                    f"{label}: zero-width spike at ({cur.x}, {cur.y})"
                )
            continue  # collinear continuation, drop the middle vertex
        merged.append(cur)
    if len(merged) < 3:
        raise InvalidGeometryError(f"{label}: degenerate after collinear merge")
    return merged


def _check_ring_simple(ring: Sequence[Point2], label: str) -> None:
    n = len(ring)
    segs = [Segment(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            rel = segments_intersect(segs[i], segs[j])
            if adjacent:
                continue  # endpoint contact expected; overlaps were merged
            if rel is not SegmentRelation.NONE:
                raise InvalidGeometryError(
                    f"{label}: edges {i} and {j} intersect ({rel.value})"
                )


def _ring_contains(ring_x: np.ndarray, ring_y: np.ndarray, px: float, py: float) -> bool:
    """Even-odd crossing test; only valid away from the boundary band."""
    qx = np.roll(ring_x, -1)
    qy = np.roll(ring_y, -1)
    straddles = (ring_y > py) != (qy > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = ring_x + (py - ring_y) * (qx - ring_x) / (qy - ring_y)
    hits = straddles & (xs > px)
    return bool(np.count_nonzero(hits) % 2)


class Floorplan:
    """Indoor environment: outer wall ring plus zero or more hole rings.

    Construction validates and normalizes geometry: consecutive duplicate
    vertices are dropped, collinear runs are merged, the outer ring is
    normalized to counter-clockwise and holes to clockwise order (a note is
    recorded whenever an input ring had to be flipped), rings must be simple,
    and holes must lie strictly inside the outer ring, pairwise disjoint.
    Instances are immutable after construction.
    """

    def __init__(
        self,
        outer: Iterable[Point2 | Sequence[float]],
        holes: Iterable[Iterable[Point2 | Sequence[float]]] = (),
    ) -> None:
        notes: list[str] = []
        ring = _clean_ring(list(outer), "outer ring")
        _check_ring_simple(ring, "outer ring")
        area = signed_area(ring)
        if abs(area) <= EPS_GEOM:
            raise InvalidGeometryError("outer ring has zero area")
        if area < 0:
            ring.reverse()
            notes.append("outer ring reversed to counter-clockwise")
        self.outer: tuple[Point2, ...] = tuple(ring)

        cleaned_holes: list[tuple[Point2, ...]] = []
        for hi, hole in enumerate(holes):
            hring = _clean_ring(list(hole), f"hole {hi}")
            _check_ring_simple(hring, f"hole {hi}")
            harea = signed_area(hring)
            if abs(harea) <= EPS_GEOM:
                raise InvalidGeometryError(f"hole {hi} has zero area")
            if harea > 0:
                hring.reverse()
                notes.append(f"hole {hi} reversed to clockwise")
            cleaned_holes.append(tuple(hring))
        self.holes: tuple[tuple[Point2, ...], ...] = tuple(cleaned_holes)
        self.normalization_notes: tuple[str, ...] = tuple(notes)

        self._validate_holes()

    # -- derived geometry ------------------------------------------------

    def _validate_holes(self) -> None:
        ox = np.array([p.x for p in self.outer])
        oy = np.array([p.y for p in self.outer])
        outer_segs = self._ring_segments(self.outer)
        for hi, hole in enumerate(self.holes):
            for p in hole:
                d = min(_point_segment_distance(p.x, p.y, s) for s in outer_segs)
                if d <= EPS_GEOM or not _ring_contains(ox, oy, p.x, p.y):
                    raise InvalidGeometryError(
                        f"hole {hi} is not strictly inside the outer ring"
                    )
            hsegs = self._ring_segments(hole)
            for s in hsegs:
                for t in outer_segs:
                    if segments_intersect(s, t) is not SegmentRelation.NONE:
                        raise InvalidGeometryError(
                            f"hole {hi} intersects the outer ring"
                        )
        for hi in range(len(self.holes)):
            for hj in range(hi + 1, len(self.holes)):
                a, b = self.holes[hi], self.holes[hj]
                for s in self._ring_segments(a):
                    for t in self._ring_segments(b):
                        if segments_intersect(s, t) is not SegmentRelation.NONE:
                            raise InvalidGeometryError(
                                f"holes {hi} and {hj} intersect"
                            )
                bx = np.array([p.x for p in b])
                by = np.array([p.y for p in b])
                ax_ = np.array([p.x for p in a])
                ay_ = np.array([p.y for p in a])
                if _ring_contains(bx, by, a[0].x, a[0].y) or _ring_contains(
                    ax_, ay_, b[0].x, b[0].y
                ):
                    raise InvalidGeometryError(f"holes {hi} and {hj} are nested")

    @staticmethod
    def _ring_segments(ring: Sequence[Point2]) -> list[Segment]:
        n = len(ring)
        return [Segment(ring[i], ring[(i + 1) % n]) for i in range(n)]

    @cached_property
    def walls(self) -> tuple[Segment, ...]:
        """All wall segments: outer ring edges first, then each hole's."""
        segs = self._ring_segments(self.outer)
        for hole in self.holes:
            segs.extend(self._ring_segments(hole))
        return tuple(segs)

    @property
    def wall_count(self) -> int:
        return len(self.walls)

    @cached_property
    def _wall_arrays(self) -> dict[str, np.ndarray]:
        ax = np.array([s.a.x for s in self.walls])
        ay = np.array([s.a.y for s in self.walls])
        bx = np.array([s.b.x for s in self.walls])
        by = np.array([s.b.y for s in self.walls])
        ex, ey = bx - ax, by - ay
        ln = np.hypot(ex, ey)
        verts = sorted({(s.a.x, s.a.y) for s in self.walls})
        vx = np.array([v[0] for v in verts])
        vy = np.array([v[1] for v in verts])
        return {
            "ax": ax, "ay": ay, "bx": bx, "by": by,
            "ex": ex, "ey": ey, "len": ln, "vx": vx, "vy": vy,
        }

    @cached_property
    def _ring_arrays(self) -> list[tuple[np.ndarray, np.ndarray]]:
        out = [(
            np.array([p.x for p in self.outer]),
            np.array([p.y for p in self.outer]),
        )]
        for hole in self.holes:
            out.append((
                np.array([p.x for p in hole]),
                np.array([p.y for p in hole]),
            ))
        return out

    def area(self) -> float:
        """Interior area: outer ring area minus hole areas."""
        a = signed_area(self.outer)
        for hole in self.holes:
            a -= abs(signed_area(hole))
        return a

    def bbox(self) -> tuple[Point2, Point2]:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return Point2(min(xs), min(ys)), Point2(max(xs), max(ys))

    def is_convex(self) -> bool:
        """True when the outer ring is convex and there are no holes."""
        if self.holes:
            return False
        n = len(self.outer)
        for i in range(n):
            p, q, r = self.outer[i], self.outer[(i + 1) % n], self.outer[(i + 2) % n]
            cross = (q.x - p.x) * (r.y - q.y) - (q.y - p.y) * (r.x - q.x)
            if cross < -EPS_GEOM:
                return False
        return True

    def clearance(self, x, y):
        """Distance from point(s) to the nearest wall. Accepts scalars or arrays."""
        arrs = self._wall_arrays
        px = np.atleast_1d(np.asarray(x, dtype=float))[:, None]
        py = np.atleast_1d(np.asarray(y, dtype=float))[:, None]
        ex, ey = arrs["ex"][None, :], arrs["ey"][None, :]
        ax, ay = arrs["ax"][None, :], arrs["ay"][None, :]
        t = ((px - ax) * ex + (py - ay) * ey) / (arrs["len"][None, :] ** 2)
        t = np.clip(t, 0.0, 1.0)
        d = np.hypot(px - (ax + t * ex), py - (ay + t * ey)).min(axis=1)
        if np.isscalar(x) or np.asarray(x).ndim == 0:
            return float(d[0])
        return d

    def locate(self, p: Point2 | Sequence[float]) -> PointLocation:
        """Ternary point classification with an EPS_GEOM boundary band."""
        p = _as_point(p)
        if self.clearance(p.x, p.y) <= EPS_GEOM:
            return PointLocation.ON_BOUNDARY
        rings = self._ring_arrays
        if not _ring_contains(rings[0][0], rings[0][1], p.x, p.y):
            return PointLocation.OUTSIDE
        for hx, hy in rings[1:]:
            if _ring_contains(hx, hy, p.x, p.y):
                return PointLocation.OUTSIDE
        return PointLocation.INSIDE

    def locate_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized interior test: True where strictly inside (beyond the
        boundary band). Points within EPS_GEOM of a wall come back False."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        near = self.clearance(xs, ys) <= EPS_GEOM
        inside = _ring_contains_many(*self._ring_arrays[0], xs, ys)
        for hx, hy in self._ring_arrays[1:]:
            inside &= ~_ring_contains_many(hx, hy, xs, ys)
        return inside & ~near

    def __repr__(self) -> str:
        return (
            f"Floorplan(outer={len(self.outer)} vertices, "
            f"holes={len(self.holes)}, walls={self.wall_count})"
        )


def _ring_contains_many(
    ring_x: np.ndarray, ring_y: np.ndarray, px: np.ndarray, py: np.ndarray
) -> np.ndarray:
    qx = np.roll(ring_x, -1)
    qy = np.roll(ring_y, -1)
    p_x = px[:, None]
    p_y = py[:, None]
    straddles = (ring_y[None, :] > p_y) != (qy[None, :] > p_y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = ring_x[None, :] + (p_y - ring_y[None, :]) * (qx - ring_x)[None, :] / (
            qy - ring_y
        )[None, :]
    hits = straddles & (xs > p_x)
    return (np.count_nonzero(hits, axis=1) % 2).astype(bool)


def point_in_floorplan(p: Point2 | Sequence[float], f: Floorplan) -> PointLocation:
    """Ternary containment: inside / on_boundary (within EPS_GEOM) / outside."""
    return f.locate(p)


# -- rotational sweep ----------------------------------------------------


def _sweep_fan(px: float, py: float, f: Floorplan) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Core sweep: returns (angles, hit_x, hit_y) sorted by angle.

    Casts three rays per wall vertex (at the vertex angle and offset by
    ±EPS_ANGLE) and keeps the nearest wall hit per ray. The caller must
    guarantee the viewpoint is strictly interior with positive clearance.
    """
    arrs = f._wall_arrays
    vx, vy = arrs["vx"], arrs["vy"]
    base = np.arctan2(vy - py, vx - px)
    angles = np.concatenate([base - EPS_ANGLE, base, base + EPS_ANGLE])
    angles.sort()
    dx = np.cos(angles)
    dy = np.sin(angles)

    ax, ay = arrs["ax"], arrs["ay"]
    ex, ey = arrs["ex"], arrs["ey"]
    apx = ax - px
    apy = ay - py
    # ray p + t*d against segment a + s*e:
    #   t = cross(a-p, e) / cross(d, e),  s = cross(a-p, d) / cross(d, e)
    denom = np.outer(dx, ey) - np.outer(dy, ex)
    t_num = apx * ey - apy * ex
    s_num = apx[None, :] * dy[:, None] - apy[None, :] * dx[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num[None, :] / denom
        s = s_num / denom
    s_eps = EPS_GEOM / arrs["len"]
    valid = (
        (np.abs(denom) > 1e-14 * arrs["len"][None, :])
        & (s >= -s_eps[None, :])
        & (s <= 1.0 + s_eps[None, :])
        & (t > EPS_GEOM)
    )
    t = np.where(valid, t, np.inf)
    t_hit = t.min(axis=1)
    if not np.all(np.isfinite(t_hit)):
        raise InvalidGeometryError(
            f"sweep ray from ({px}, {py}) escaped the floorplan; "
            "viewpoint is not strictly interior"
        )
    return angles, px + t_hit * dx, py + t_hit * dy


def _fan_contains(
    angles: np.ndarray,
    fx: np.ndarray,
    fy: np.ndarray,
    px: float,
    py: float,
    tx: np.ndarray,
    ty: np.ndarray,
) -> np.ndarray:
    """Inclusive containment of targets in the fan around (px, py).

    The wedge holding each target's angle is located by binary search; the
    full triangle test runs on that wedge and both angular neighbors (ORed)
    so targets sitting exactly on a window ray or inside a degenerate
    auxiliary-ray sliver are not lost to floating-point ties.
    """
    n = len(angles)
    tx = np.asarray(tx, dtype=float)
    ty = np.asarray(ty, dtype=float)
    theta = np.arctan2(ty - py, tx - px)
    base = np.searchsorted(angles, theta, side="right") - 1  # -1 wraps to n-1
    ok = np.zeros(tx.shape, dtype=bool)
    for off in (-1, 0, 1):
        j = (base + off) % n
        k = (j + 1) % n
        q1x, q1y = fx[j], fy[j]
        q2x, q2y = fx[k], fy[k]
        # triangle (p, q1, q2) is CCW; inside = left of all three edges
        d1 = (q1x - px) * (ty - py) - (q1y - py) * (tx - px)
        d2 = (q2x - q1x) * (ty - q1y) - (q2y - q1y) * (tx - q1x)
        d3 = (px - q2x) * (ty - q2y) - (py - q2y) * (tx - q2x)
        t1 = EPS_GEOM * np.hypot(q1x - px, q1y - py) + 1e-12
        t2 = EPS_GEOM * np.hypot(q2x - q1x, q2y - q1y) + 1e-12
        t3 = EPS_GEOM * np.hypot(px - q2x, py - q2y) + 1e-12
        ok |= (d1 >= -t1) & (d2 >= -t2) & (d3 >= -t3)
    ok |= np.hypot(tx - px, ty - py) <= EPS_GEOM  # target at the viewpoint
    return ok


class VisibilityPolygon:
    """Star-shaped visibility region as a triangle fan around the viewpoint.

    ``angles`` / ``points`` hold the sweep hits in increasing angular order;
    consecutive hits (with wraparound) together with the viewpoint form the
    fan triangles. The outline traversed in order is the region boundary,
    radial window edges included.
    """

    def __init__(self, viewpoint: Point2, angles: np.ndarray, fx: np.ndarray, fy: np.ndarray):
        self.viewpoint = viewpoint
        self.angles = angles
        self._fx = fx
        self._fy = fy

    def __len__(self) -> int:
        return len(self.angles)

    def outline(self) -> list[Point2]:
        return [Point2(float(x), float(y)) for x, y in zip(self._fx, self._fy)]

    def outline_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self._fx, self._fy

    def triangles(self) -> Iterator[tuple[Point2, Point2, Point2]]:
        """Fan triangles (viewpoint, hit_i, hit_{i+1}); zero-area slivers skipped."""
        n = len(self.angles)
        for i in range(n):
            j = (i + 1) % n
            a = Point2(float(self._fx[i]), float(self._fy[i]))
            b = Point2(float(self._fx[j]), float(self._fy[j]))
            cross = (a.x - self.viewpoint.x) * (b.y - self.viewpoint.y) - (
                a.y - self.viewpoint.y
            ) * (b.x - self.viewpoint.x)
            if abs(cross) <= EPS_GEOM * EPS_GEOM:
                continue
            yield (self.viewpoint, a, b)

    def area(self) -> float:
        x, y = self._fx, self._fy
        return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))

    def contains(self, target: Point2 | Sequence[float]) -> bool:
        t = _as_point(target)
        res = _fan_contains(
            self.angles, self._fx, self._fy,
            self.viewpoint.x, self.viewpoint.y,
            np.array([t.x]), np.array([t.y]),
        )
        return bool(res[0])

    def contains_many(self, tx: np.ndarray, ty: np.ndarray) -> np.ndarray:
        return _fan_contains(
            self.angles, self._fx, self._fy,
            self.viewpoint.x, self.viewpoint.y, tx, ty,
        )


def visibility_polygon(viewpoint: Point2 | Sequence[float], f: Floorplan) -> VisibilityPolygon:
    """Visibility polygon of an interior viewpoint.

    Raises PlacementInfeasibleError when the viewpoint is outside the
    floorplan, on its boundary, or closer than the minimum clearance to a
    wall — boundary viewpoints are rejected, never perturbed.
    """
    vp = _as_point(viewpoint)
    loc = f.locate(vp)
    if loc is not PointLocation.INSIDE or f.clearance(vp.x, vp.y) <= MIN_VIEWPOINT_CLEARANCE:
        raise PlacementInfeasibleError(
            f"viewpoint ({vp.x}, {vp.y}) is not strictly inside the floorplan"
        )
    angles, fx, fy = _sweep_fan(vp.x, vp.y, f)
    return VisibilityPolygon(vp, angles, fx, fy)


def sees(
    viewpoint: Point2 | Sequence[float],
    target: Point2 | Sequence[float],
    vp: VisibilityPolygon,
) -> bool:
    """Inclusive visibility of target from viewpoint, via the precomputed fan.

    Points on walls (and exactly on window edges) test as visible within
    EPS_GEOM; this is intentional so wall sample points on the far edge of a
    fan triangle are covered.
    """
    v = _as_point(viewpoint)
    if v.distance_to(vp.viewpoint) > EPS_GEOM:
        raise ValueError("visibility polygon was computed for a different viewpoint")
    return vp.contains(target)
