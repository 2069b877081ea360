"""SVG rendering checks: structure, marker counts, containment."""

import random

from camplan.floorplans import (
    corridor_loop,
    l_shape,
    random_rectilinear,
    rectangle,
)
from camplan.geometry import PointLocation
from camplan.planner import PlanRequest, plan, verify_placements
from camplan.render_svg import render_plan_svg, render_verify_svg
from camplan.sampling import SamplingConfig
from camplan.visibility import Constraints

COARSE = SamplingConfig(boundary_spacing=0.5, grid_spacing=1.0)

MISSED_FILL = 'fill="#e03131"'
COVERED_FILL = 'fill="#2f9e44"'
MARKER = '<circle r="7"'


def test_single_camera_convex_svg():
    report = plan(PlanRequest(floorplan=rectangle(4.0, 4.0), sampling=COARSE))
    svg = render_plan_svg(report)
    assert svg.splitlines()[0].startswith("<svg")
    assert svg.count(MARKER) == 1
    assert MISSED_FILL not in svg
    assert svg.count(COVERED_FILL) == report.stats.n_boundary
    assert svg.count("<polygon") == 1  # one coverage region
    assert 'fill-rule="evenodd"' in svg
    assert "cameras: 1" in svg


def test_hole_ring_in_floorplan_path():
    report = plan(PlanRequest(
        floorplan=corridor_loop(12.0, 3.0), sampling=COARSE))
    svg = render_plan_svg(report)
    # outer + hole rings end up as two closed subpaths
    path_line = next(line for line in svg.splitlines() if "evenodd" in line)
    assert path_line.count(" Z") == 2
    assert svg.count(MARKER) == report.solution.objective


def test_uncoverable_points_render_missed():
    report = plan(PlanRequest(
        floorplan=rectangle(1.0, 1.0),
        sampling=SamplingConfig(boundary_spacing=0.25, grid_spacing=0.5),
        constraints=Constraints(d_max=0.45),
    ))
    assert report.solution.objective == 0
    svg = render_plan_svg(report)
    assert svg.count(MISSED_FILL) == report.stats.n_boundary
    assert svg.count(MARKER) == 0


def test_verify_svg_shows_gap():
    f = l_shape(4.0)
    report = verify_placements(f, [(0.5, 7.5)], sampling=COARSE)
    svg = render_verify_svg(report, f)
    assert svg.count(MARKER) == 1
    assert svg.count(MISSED_FILL) == len(report.missed)
    assert svg.count(COVERED_FILL) == len(report.covered)
    assert "(manual)" in svg


def test_coverage_regions_contained_in_floorplan():
    # the drawn geometry must never poke outside the walls
    for seed in (5, 21):
        f = random_rectilinear(seed)
        lo, hi = f.bbox()
        span = max(hi.x - lo.x, hi.y - lo.y)
        report = plan(PlanRequest(
            floorplan=f,
            sampling=SamplingConfig(boundary_spacing=span / 40, grid_spacing=span / 12),
            constraints=Constraints(d_max=span / 2),
        ))
        assert report.solution.objective >= 1
        for ring in report.coverage_geometry.values():
            for x, y in ring:
                assert f.locate((x, y)) is not PointLocation.OUTSIDE, (
                    f"seed {seed}: svg region vertex ({x}, {y}) outside"
                )
        svg = render_plan_svg(report)
        assert svg.count(MARKER) == report.solution.objective
