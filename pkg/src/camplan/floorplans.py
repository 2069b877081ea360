"""Synthetic floorplan builders: fixed shapes and seeded random layouts.

The random generator grows an edge-connected cell region on a coarse grid,
rejects configurations whose boundary would pinch into a non-simple polygon,
traces the single boundary loop, and then stretches grid columns/rows by
random amounts so coordinates stay generic (no accidental global
alignments). Everything is deterministic in the seed.
"""

from __future__ import annotations

import random

from .errors import InvalidGeometryError
from .geometry import Floorplan, Point2, PointLocation


def rectangle(width: float, height: float, origin: tuple[float, float] = (0.0, 0.0)) -> Floorplan:
    x0, y0 = origin
    return Floorplan([
        (x0, y0), (x0 + width, y0), (x0 + width, y0 + height), (x0, y0 + height),
    ])


def l_shape(scale: float = 1.0) -> Floorplan:
    """L-shaped room: a 2x2 square with the top-right 1x1 quadrant removed."""
    s = scale
    return Floorplan([
        (0, 0), (2 * s, 0), (2 * s, 1 * s), (1 * s, 1 * s), (1 * s, 2 * s), (0, 2 * s),
    ])


def corridor_loop(outer_side: float = 36.0, corridor_width: float = 6.0) -> Floorplan:
    """Square ring corridor: outer square with a centered square hole."""
    if not 0 < 2 * corridor_width < outer_side:
        raise InvalidGeometryError("corridor width must fit inside the outer square")
    w = corridor_width
    s = outer_side
    return Floorplan(
        [(0, 0), (s, 0), (s, s), (0, s)],
        holes=[[(w, w), (s - w, w), (s - w, s - w), (w, s - w)]],
    )


def comb(
    teeth: int,
    tooth_width: float = 1.0,
    gap: float = 1.0,
    tooth_depth: float = 4.0,
    base_depth: float = 0.5,
) -> Floorplan:
    """Comb room: a shallow base corridor with deep teeth opening upward.

    With a shallow base and teeth much deeper than wide, no interior point
    can look into two different teeth, so covering all walls needs at least
    one camera per tooth.
    """
    if teeth < 1:
        raise InvalidGeometryError("comb needs at least one tooth")
    pitch = tooth_width + gap
    width = pitch * (teeth - 1) + tooth_width
    b = base_depth
    pts: list[tuple[float, float]] = [(0.0, 0.0), (width, 0.0)]
    for i in reversed(range(teeth)):
        x_l = pitch * i
        x_r = x_l + tooth_width
        pts.extend([
            (x_r, b),
            (x_r, b + tooth_depth),
            (x_l, b + tooth_depth),
            (x_l, b),
        ])
    return Floorplan(pts)


# -- seeded random rectilinear rooms --------------------------------------

_NEIGHBORS4 = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _would_pinch(cells: set[tuple[int, int]], c: tuple[int, int]) -> bool:
    # adding c must not touch the region diagonally without an orthogonal link
    i, j = c
    for di in (-1, 1):
        for dj in (-1, 1):
            if (i + di, j + dj) in cells:
                if (i + di, j) not in cells and (i, j + dj) not in cells:
                    return True
    return False


def _grow_region(rng: random.Random, gw: int, gh: int, target: int) -> set[tuple[int, int]]:
    start = (rng.randrange(gw), rng.randrange(gh))
    cells = {start}
    while len(cells) < target:
        frontier = sorted(
            {
                (i + di, j + dj)
                for (i, j) in cells
                for di, dj in _NEIGHBORS4
                if 0 <= i + di < gw and 0 <= j + dj < gh
            }
            - cells
        )
        frontier = [c for c in frontier if not _would_pinch(cells, c)]
        if not frontier:
            break
        cells.add(frontier[rng.randrange(len(frontier))])
    return cells


def _fill_pockets(cells: set[tuple[int, int]], gw: int, gh: int) -> None:
    # empty cells not reachable from outside the grid are enclosed pockets
    reach: set[tuple[int, int]] = set()
    stack = [(-1, -1)]
    while stack:
        c = stack.pop()
        if c in reach:
            continue
        reach.add(c)
        i, j = c
        for di, dj in _NEIGHBORS4:
            n = (i + di, j + dj)
            if n in cells or n in reach:
                continue
            if -1 <= n[0] <= gw and -1 <= n[1] <= gh:
                stack.append(n)
    for i in range(gw):
        for j in range(gh):
            if (i, j) not in cells and (i, j) not in reach:
                cells.add((i, j))


def _trace_boundary(cells: set[tuple[int, int]]) -> list[tuple[int, int]] | None:
    """Trace the single CCW boundary loop of the cell union, or None if the
    union's boundary is not a simple loop (pinch vertex / multiple loops)."""
    edges: dict[tuple[int, int], tuple[int, int]] = {}
    for (i, j) in cells:
        sides = (
            ((i, j - 1), (i, j), (i + 1, j)),        # bottom, left-to-right
            ((i + 1, j), (i + 1, j), (i + 1, j + 1)),  # right, upward
            ((i, j + 1), (i + 1, j + 1), (i, j + 1)),  # top, right-to-left
            ((i - 1, j), (i, j + 1), (i, j)),          # left, downward
        )
        for neighbor, a, b in sides:
            if neighbor in cells:
                continue
            if a in edges:
                return None  # two outgoing boundary edges at one vertex: pinch
            edges[a] = b
    if not edges:
        return None
    start = min(edges)
    loop = [start]
    cur = edges[start]
    while cur != start:
        loop.append(cur)
        nxt = edges.get(cur)
        if nxt is None:
            return None
        cur = nxt
    if len(loop) != len(edges):
        return None  # more than one loop
    return loop


def _collapse_collinear(loop: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    n = len(loop)
    for k in range(n):
        p = loop[(k - 1) % n]
        c = loop[k]
        q = loop[(k + 1) % n]
        if (c[0] - p[0]) * (q[1] - c[1]) != (c[1] - p[1]) * (q[0] - c[0]):
            out.append(c)
    return out


def random_rectilinear(
    seed: int,
    min_walls: int = 8,
    max_walls: int = 40,
    allow_hole: bool = True,
) -> Floorplan:
    """Seeded random simple rectilinear floorplan with 8..40 outer walls.

    When allow_hole is set, roughly half the outputs carve one rectangular
    hole inside a fully interior grid cell (skipped when no such cell
    exists). Deterministic: same seed, same floorplan.
    """
    for attempt in range(200):
        rng = random.Random(seed * 10_007 + attempt)
        gw = rng.randint(3, 7)
        gh = rng.randint(3, 7)
        target = rng.randint(max(3, gw * gh // 3), max(4, (2 * gw * gh) // 3))
        cells = _grow_region(rng, gw, gh, target)
        _fill_pockets(cells, gw, gh)
        loop = _trace_boundary(cells)
        if loop is None:
            continue
        corners = _collapse_collinear(loop)
        if not (min_walls <= len(corners) <= max_walls):
            continue

        # stretch grid lines by random spans so coordinates stay generic
        xs = [0.0]
        for _ in range(gw + 1):
            xs.append(xs[-1] + rng.uniform(1.1, 3.2))
        ys = [0.0]
        for _ in range(gh + 1):
            ys.append(ys[-1] + rng.uniform(1.1, 3.2))
        outer = [(xs[i], ys[j]) for (i, j) in corners]

        holes: list[list[tuple[float, float]]] = []
        if allow_hole and rng.random() < 0.5:
            interior = sorted(
                (i, j)
                for (i, j) in cells
                if all(
                    (i + di, j + dj) in cells
                    for di in (-1, 0, 1)
                    for dj in (-1, 0, 1)
                )
            )
            if interior:
                i, j = interior[rng.randrange(len(interior))]
                fx0, fx1 = rng.uniform(0.2, 0.35), rng.uniform(0.65, 0.8)
                fy0, fy1 = rng.uniform(0.2, 0.35), rng.uniform(0.65, 0.8)
                x0 = xs[i] + fx0 * (xs[i + 1] - xs[i])
                x1 = xs[i] + fx1 * (xs[i + 1] - xs[i])
                y0 = ys[j] + fy0 * (ys[j + 1] - ys[j])
                y1 = ys[j] + fy1 * (ys[j + 1] - ys[j])
                holes.append([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
        return Floorplan(outer, holes=holes)
    raise InvalidGeometryError(f"no valid random floorplan for seed {seed}")


def random_interior_point(f: Floorplan, rng: random.Random, clearance: float = 1e-6) -> Point2:
    """Rejection-sample a point strictly inside f with the given wall clearance."""
    lo, hi = f.bbox()
    for _ in range(10_000):
        x = rng.uniform(lo.x, hi.x)
        y = rng.uniform(lo.y, hi.y)
        if f.locate(Point2(x, y)) is PointLocation.INSIDE and f.clearance(x, y) > clearance:
            return Point2(x, y)
    raise InvalidGeometryError("could not sample an interior point")
