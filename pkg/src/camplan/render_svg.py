"""SVG rendering of plan and verify reports.

World coordinates are meters with y up; SVG y grows downward, so the
mapping flips y. Output is a standalone SVG string: floorplan fill with
evenodd holes, one translucent coverage region per camera, boundary dots
colored covered/missed, camera markers, and a small stats block.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .geometry import Floorplan
from .planner import PlanReport, VerifyReport

_CANVAS = 900.0  # longest floorplan dimension maps to this many pixels
_PAD = 40.0

_COVERED = "#2f9e44"
_MISSED = "#e03131"
_WALL = "#1a1a2e"
_FLOOR = "#f1f3f5"
_CAMERA = "#212529"

# golden-angle hue steps keep adjacent camera regions distinguishable
_HUE_STEP = 137.508


class _Mapper:
    def __init__(self, f: Floorplan) -> None:
        lo, hi = f.bbox()
        span = max(hi.x - lo.x, hi.y - lo.y)
        self.scale = _CANVAS / span
        self.lo = lo
        self.width = (hi.x - lo.x) * self.scale + 2 * _PAD
        self.height = (hi.y - lo.y) * self.scale + 2 * _PAD
        self.max_y = hi.y

    def pt(self, x: float, y: float) -> tuple[float, float]:
        return (
            _PAD + (x - self.lo.x) * self.scale,
            _PAD + (self.max_y - y) * self.scale,
        )

    def fmt(self, x: float, y: float) -> str:
        sx, sy = self.pt(x, y)
        return f"{sx:.2f},{sy:.2f}"


def _ring_path(m: _Mapper, ring: Sequence) -> str:
    coords = " L ".join(m.fmt(v.x, v.y) for v in ring)
    return f"M {coords} Z"


def _polygon_points(m: _Mapper, ring: Sequence[tuple[float, float]]) -> str:
    return " ".join(m.fmt(x, y) for x, y in ring)


def _floorplan_svg(m: _Mapper, f: Floorplan) -> list[str]:
    paths = [_ring_path(m, f.outer)]
    paths.extend(_ring_path(m, hole) for hole in f.holes)
    d = " ".join(paths)
    return [
        f'<path d="{d}" fill="{_FLOOR}" fill-rule="evenodd" '
        f'stroke="{_WALL}" stroke-width="2.5" stroke-linejoin="round"/>'
    ]


def _camera_marker(m: _Mapper, x: float, y: float, label: str) -> str:
    sx, sy = m.pt(x, y)
    return (
        f'<g transform="translate({sx:.2f},{sy:.2f})">'
        f'<circle r="7" fill="{_CAMERA}" stroke="white" stroke-width="1.5"/>'
        f'<text y="4" text-anchor="middle" font-size="9" fill="white" '
        f'font-family="sans-serif">{label}</text></g>'
    )


def _legend(m: _Mapper, lines: Sequence[str]) -> list[str]:
    out = [
        f'<g font-family="sans-serif" font-size="13" fill="{_WALL}">'
    ]
    for i, line in enumerate(lines):
        out.append(f'<text x="10" y="{18 + i * 17}">{line}</text>')
    out.append("</g>")
    return out


def render_plan_svg(report: PlanReport) -> str:
    f = report.request.floorplan
    m = _Mapper(f)
    sol = report.solution
    body: list[str] = []
    body.extend(_floorplan_svg(m, f))

    for k, c in enumerate(sol.chosen):
        region = report.coverage_geometry.get(c)
        if not region:
            continue
        hue = (k * _HUE_STEP) % 360.0
        body.append(
            f'<polygon points="{_polygon_points(m, region)}" '
            f'fill="hsl({hue:.0f},70%,45%)" fill-opacity="0.28" '
            f'stroke="hsl({hue:.0f},70%,35%)" stroke-width="1" stroke-opacity="0.6"/>'
        )

    missed = set(report.missed)
    for b in report.boundary:
        color = _MISSED if b.index in missed else _COVERED
        sx, sy = m.pt(b.position.x, b.position.y)
        body.append(f'<circle cx="{sx:.2f}" cy="{sy:.2f}" r="2.2" fill="{color}"/>')

    for k, c in enumerate(sol.chosen):
        pos = report.candidates[c].position
        body.append(_camera_marker(m, pos.x, pos.y, str(k + 1)))

    body.extend(
        _legend(
            m,
            [
                f"cameras: {sol.objective} ({sol.status.value})",
                f"boundary: {report.stats.n_boundary} points, "
                f"{len(report.missed)} missed",
                f"candidates: {report.stats.n_candidates}, "
                f"pairs: {report.stats.pair_count}",
            ],
        )
    )
    return _document(m, body)


def render_verify_svg(report: VerifyReport, f: Floorplan) -> str:
    m = _Mapper(f)
    body: list[str] = []
    body.extend(_floorplan_svg(m, f))
    missed = set(report.missed)
    for b in report.boundary:
        color = _MISSED if b.index in missed else _COVERED
        sx, sy = m.pt(b.position.x, b.position.y)
        body.append(f'<circle cx="{sx:.2f}" cy="{sy:.2f}" r="2.2" fill="{color}"/>')
    for k, pos in enumerate(report.placements):
        body.append(_camera_marker(m, pos.x, pos.y, str(k + 1)))
    body.extend(
        _legend(
            m,
            [
                f"cameras: {len(report.placements)} (manual)",
                f"boundary: {len(report.boundary)} points, "
                f"{len(report.missed)} missed",
            ],
        )
    )
    return _document(m, body)


def _document(m: _Mapper, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{m.width:.0f}" height="{m.height:.0f}" '
        f'viewBox="0 0 {m.width:.2f} {m.height:.2f}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def write_plan_svg(report: PlanReport, path: str | Path) -> None:
    Path(path).write_text(render_plan_svg(report))
