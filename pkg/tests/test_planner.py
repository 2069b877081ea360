"""Pipeline tests: plan, verify_placements, coverage regions, documents."""

import json
import math
import random

import pytest

from camplan.errors import (
    ConfigError,
    FloorplanFormatError,
    InvalidGeometryError,
    PlacementInfeasibleError,
)
from camplan.floorplans import (
    comb,
    corridor_loop,
    l_shape,
    random_interior_point,
    random_rectilinear,
    rectangle,
)
from camplan.geometry import Point2, PointLocation, visibility_polygon
from camplan.planner import (
    PlanRequest,
    canonical_json,
    coverage_region,
    floorplan_document,
    load_floorplan,
    load_placements,
    load_solution,
    parse_plan_request,
    plan,
    solution_document,
    verify_placements,
    write_solution,
)
from camplan.sampling import SamplingConfig
from camplan.solver import SolveStatus
from camplan.visibility import Constraints


COARSE = SamplingConfig(boundary_spacing=0.5, grid_spacing=1.0)


def shoelace(pts):
    area = 0.0
    for i in range(len(pts)):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % len(pts)]
        area += x0 * y1 - x1 * y0
    return 0.5 * area


def test_plan_unit_square_needs_one_camera():
    req = PlanRequest(floorplan=rectangle(4.0, 4.0), sampling=COARSE)
    report = plan(req)
    assert report.solution.objective == 1
    assert report.solution.status is SolveStatus.OPTIMAL
    assert report.missed == ()
    assert len(report.covered) == report.stats.n_boundary
    # one coverage region, unclipped (no d_max), keyed by the chosen site
    c = report.solution.chosen[0]
    assert set(report.coverage_geometry) == {c}
    assert len(report.coverage_geometry[c]) >= 4


def test_plan_stats_consistent_with_matrix():
    req = PlanRequest(floorplan=l_shape(4.0), sampling=COARSE)
    report = plan(req)
    assert report.stats.n_boundary == len(report.boundary)
    assert report.stats.n_candidates == len(report.candidates)
    assert report.stats.pair_count > 0
    assert report.stats.matrix_build_time >= 0.0
    assert report.stats.solve_time >= 0.0


def test_plan_comb_needs_one_camera_per_tooth():
    f = comb(3)
    req = PlanRequest(floorplan=f, sampling=SamplingConfig(
        boundary_spacing=0.5, grid_spacing=0.5))
    report = plan(req)
    assert report.solution.status is SolveStatus.OPTIMAL
    assert report.solution.objective == 3
    assert report.missed == ()


def test_plan_greedy_covers_with_gap_status():
    req = PlanRequest(
        floorplan=l_shape(4.0), sampling=COARSE, solver_choice="greedy"
    )
    report = plan(req)
    assert report.solution.status is SolveStatus.FEASIBLE_BOUND_GAP
    assert report.missed == ()


def test_plan_constrained_corridor_needs_more_cameras():
    f = corridor_loop(12.0, 3.0)
    sampling = SamplingConfig(boundary_spacing=0.5, grid_spacing=0.75)
    free = plan(PlanRequest(floorplan=f, sampling=sampling))
    tight = plan(PlanRequest(
        floorplan=f,
        sampling=sampling,
        constraints=Constraints(d_max=2.0, theta_max_deg=45.0),
    ))
    assert free.solution.status is SolveStatus.OPTIMAL
    assert tight.solution.status is SolveStatus.OPTIMAL
    assert tight.solution.objective > free.solution.objective
    assert tight.stats.pair_count < free.stats.pair_count


def test_plan_rejects_max_range_below_standoff():
    # fov 150deg at 1.5 m needs ~0.402 m of standoff
    with pytest.raises(ConfigError):
        PlanRequest(
            floorplan=rectangle(4.0, 4.0),
            constraints=Constraints(d_max=0.3),
        )


def test_plan_rejects_bad_solver_and_budget():
    f = rectangle(2.0, 2.0)
    with pytest.raises(ConfigError):
        PlanRequest(floorplan=f, solver_choice="annealing")
    with pytest.raises(ConfigError):
        PlanRequest(floorplan=f, time_budget_s=0.0)
    with pytest.raises(ConfigError):
        PlanRequest(floorplan=f, workers=0)


def test_plan_workers_do_not_change_result():
    f = l_shape(3.0)
    a = plan(PlanRequest(floorplan=f, sampling=COARSE, workers=1))
    b = plan(PlanRequest(floorplan=f, sampling=COARSE, workers=4))
    assert canonical_json(solution_document(a), drop_timing=True) == \
        canonical_json(solution_document(b), drop_timing=True)


def test_plan_uncoverable_walls_yield_empty_optimum():
    # single candidate at the square's center, max range shorter than the
    # 0.5 m to every wall: nothing is coverable, optimum is zero cameras
    req = PlanRequest(
        floorplan=rectangle(1.0, 1.0),
        sampling=SamplingConfig(boundary_spacing=0.25, grid_spacing=0.5),
        constraints=Constraints(d_max=0.45),
    )
    report = plan(req)
    assert report.solution.objective == 0
    assert report.solution.status is SolveStatus.OPTIMAL
    assert len(report.missed) == report.stats.n_boundary


# -- verify_placements -----------------------------------------------------

def test_verify_center_covers_square():
    f = rectangle(4.0, 4.0)
    report = verify_placements(f, [(2.0, 2.0)], sampling=COARSE)
    assert report.missed == ()
    assert len(report.covered) == len(report.boundary)
    assert report.per_camera[0] == tuple(range(len(report.boundary)))


def test_verify_empty_placements_miss_everything():
    f = rectangle(4.0, 4.0)
    report = verify_placements(f, [], sampling=COARSE)
    assert report.covered == ()
    assert report.missed == tuple(range(len(report.boundary)))


def test_verify_rejects_outside_placement():
    f = rectangle(4.0, 4.0)
    with pytest.raises(PlacementInfeasibleError) as err:
        verify_placements(f, [(2.0, 2.0), (9.0, 2.0)], sampling=COARSE)
    assert "placement 1" in str(err.value)


def test_verify_gap_in_l_shape():
    # a camera tucked in one arm cannot see around the reflex corner
    f = l_shape(4.0)
    report = verify_placements(f, [(0.5, 7.5)], sampling=COARSE)
    assert len(report.missed) > 0
    assert set(report.covered) | set(report.missed) == set(
        range(len(report.boundary))
    )


# -- coverage regions -------------------------------------------------------

def test_coverage_region_unclipped_is_the_fan():
    f = rectangle(2.0, 2.0)
    vp = visibility_polygon(Point2(1.0, 1.0), f)
    assert coverage_region(vp, None) == [
        (x, y) for x, y in zip(*vp.outline_arrays())
    ]
    # a generous range leaves the fan untouched too
    assert coverage_region(vp, 10.0) == coverage_region(vp, None)


def test_coverage_region_full_disc_far_from_walls():
    f = rectangle(10.0, 10.0)
    vp = visibility_polygon(Point2(5.0, 5.0), f)
    region = coverage_region(vp, 2.0)
    for x, y in region:
        assert math.hypot(x - 5.0, y - 5.0) == pytest.approx(2.0, abs=1e-9)
    assert shoelace(region) == pytest.approx(math.pi * 4.0, rel=3e-3)


def test_coverage_region_disc_clipped_by_one_wall():
    # camera 1 m from the left wall, range 2: a circular segment is cut off
    f = rectangle(10.0, 10.0)
    vp = visibility_polygon(Point2(1.0, 5.0), f)
    region = coverage_region(vp, 2.0)
    expect = math.pi * 4.0 - (4.0 * math.acos(0.5) - math.sqrt(3.0))
    assert shoelace(region) == pytest.approx(expect, rel=5e-3)
    for x, y in region:
        assert x >= -1e-9
        assert math.hypot(x - 1.0, y - 5.0) <= 2.0 + 1e-9


def test_coverage_region_stays_inside_floorplan():
    for seed in (3, 11, 27):
        f = random_rectilinear(seed)
        rng = random.Random(seed + 1)
        lo, hi = f.bbox()
        span = max(hi.x - lo.x, hi.y - lo.y)
        for _ in range(12):
            p = random_interior_point(f, rng, clearance=0.05)
            vp = visibility_polygon(p, f)
            d_max = rng.uniform(0.2, span)
            region = coverage_region(vp, d_max)
            assert len(region) >= 3
            for x, y in region:
                assert f.locate((x, y)) is not PointLocation.OUTSIDE, (
                    f"seed {seed}: region vertex ({x}, {y}) escaped"
                )
                assert math.hypot(x - p.x, y - p.y) <= d_max + 1e-9
            assert shoelace(region) <= min(
                vp.area(), math.pi * d_max * d_max
            ) + 1e-6


# -- documents ---------------------------------------------------------------

def test_floorplan_document_round_trip():
    f = corridor_loop(12.0, 3.0)
    doc = floorplan_document(f)
    g = load_floorplan(doc)
    assert [(v.x, v.y) for v in g.outer] == [(v.x, v.y) for v in f.outer]
    assert len(g.holes) == len(f.holes)
    # JSON text and file inputs behave the same
    assert load_floorplan(json.dumps(doc)).wall_count == f.wall_count


def test_load_floorplan_from_path(tmp_path):
    doc = floorplan_document(rectangle(3.0, 2.0))
    path = tmp_path / "room.json"
    path.write_text(json.dumps(doc))
    f = load_floorplan(path)
    assert f.wall_count == 4
    assert f.area() == pytest.approx(6.0)
    g = load_floorplan(str(path))
    assert g.wall_count == 4


def test_load_floorplan_document_errors():
    good = floorplan_document(rectangle(1.0, 1.0))
    with pytest.raises(FloorplanFormatError):
        load_floorplan({**good, "version": 2})
    with pytest.raises(FloorplanFormatError):
        load_floorplan({**good, "units": "feet"})
    with pytest.raises(FloorplanFormatError):
        load_floorplan({**good, "mystery": 1})
    with pytest.raises(FloorplanFormatError):
        load_floorplan({"version": 1, "units": "meters"})  # no outer
    with pytest.raises(FloorplanFormatError):
        load_floorplan({**good, "outer": [[0, 0], [1, "x"], [1, 1]]})
    with pytest.raises(FloorplanFormatError):
        load_floorplan("not json and not a file")
    with pytest.raises(FloorplanFormatError):
        load_floorplan('{"version": 1,')


def test_load_floorplan_geometry_errors():
    bowtie = {"version": 1, "units": "meters",
              "outer": [[0, 0], [2, 2], [2, 0], [0, 2]]}
    with pytest.raises(InvalidGeometryError) as err:
        load_floorplan(bowtie)
    assert "intersect" in str(err.value)
    stray_hole = {
        "version": 1, "units": "meters",
        "outer": [[0, 0], [2, 0], [2, 2], [0, 2]],
        "holes": [[[5, 5], [6, 5], [6, 6], [5, 6]]],
    }
    with pytest.raises(InvalidGeometryError) as err:
        load_floorplan(stray_hole)
    assert "not strictly inside" in str(err.value)


def test_load_floorplan_normalizes_orientation():
    doc = {"version": 1, "units": "meters",
           "outer": [[0, 0], [0, 2], [2, 2], [2, 0]]}  # clockwise input
    f = load_floorplan(doc)
    assert f.area() == pytest.approx(4.0)
    assert any("reversed" in note for note in f.normalization_notes)


def test_solution_document_round_trip(tmp_path):
    report = plan(PlanRequest(floorplan=l_shape(4.0), sampling=COARSE))
    path = tmp_path / "solution.json"
    write_solution(report, path)
    doc = load_solution(path)
    assert doc["chosen_indices"] == list(report.solution.chosen)
    assert doc["objective"] == report.solution.objective
    assert doc["status"] == report.solution.status.value
    assert doc["stats"]["pair_count"] == report.stats.pair_count
    # chosen positions resolve back to the candidate coordinates
    for pos, c in zip(doc["chosen"], report.solution.chosen):
        cand = report.candidates[c].position
        assert pos == [cand.x, cand.y]


def test_load_solution_rejects_inconsistent_document():
    with pytest.raises(FloorplanFormatError):
        load_solution({"version": 1, "chosen": [[1, 1]], "chosen_indices": [0],
                       "objective": 2, "status": "optimal"})
    with pytest.raises(FloorplanFormatError):
        load_solution({"version": 1, "chosen": [[1, 1]]})


def test_load_placements_accepts_both_shapes():
    assert load_placements({"placements": [[1, 2], [3, 4]]}) == [(1.0, 2.0), (3.0, 4.0)]
    assert load_placements({"chosen": [[1, 2]], "objective": 1}) == [(1.0, 2.0)]
    with pytest.raises(FloorplanFormatError):
        load_placements({"nothing": []})
    with pytest.raises(FloorplanFormatError):
        load_placements({"placements": [[1, 2, 3]]})


def test_parse_plan_request_full_and_defaults():
    fdoc = floorplan_document(rectangle(4.0, 4.0))
    req = parse_plan_request({
        "floorplan": fdoc,
        "sampling": {"boundary_spacing": 0.5, "grid_spacing": 1.0},
        "constraints": {"d_max": 5.0, "theta_max_deg": 45.0},
        "solver": "greedy",
        "time_budget_s": 10.0,
    })
    assert req.solver_choice == "greedy"
    assert req.constraints.d_max == 5.0
    assert req.sampling.boundary_spacing == 0.5
    assert req.time_budget_s == 10.0
    bare = parse_plan_request({"floorplan": fdoc})
    assert bare.solver_choice == "exact"
    assert bare.constraints.d_max is None
    assert bare.sampling.boundary_spacing == SamplingConfig().boundary_spacing


def test_parse_plan_request_rejects_unknown_and_missing():
    fdoc = floorplan_document(rectangle(4.0, 4.0))
    with pytest.raises(ConfigError):
        parse_plan_request({})
    with pytest.raises(ConfigError):
        parse_plan_request({"floorplan": fdoc, "solver": "magic"})
    with pytest.raises(ConfigError):
        parse_plan_request({"floorplan": fdoc, "sampling": {"spacing": 1}})
    with pytest.raises(ConfigError):
        parse_plan_request({"floorplan": fdoc, "constraints": {"d_max": "far"}})
    with pytest.raises(ConfigError):
        parse_plan_request({"floorplan": fdoc, "extra": 1})
    with pytest.raises(ConfigError):
        parse_plan_request({"floorplan": fdoc, "workers": 2.5})


def test_pipeline_determinism_modulo_timing():
    req_payload = {
        "floorplan": floorplan_document(corridor_loop(12.0, 3.0)),
        "sampling": {"boundary_spacing": 0.5, "grid_spacing": 0.75},
        "constraints": {"d_max": 4.0},
    }
    docs = []
    for _ in range(2):
        report = plan(parse_plan_request(req_payload))
        docs.append(canonical_json(solution_document(report), drop_timing=True))
    assert docs[0] == docs[1]
    # timing fields really are present before stripping
    full = canonical_json(solution_document(plan(parse_plan_request(req_payload))))
    assert "matrix_build_time" in full and "solve_time" in full
    assert "matrix_build_time" not in docs[0]
