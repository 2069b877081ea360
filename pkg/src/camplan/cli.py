"""Command line interface: plan, verify, serve."""

from __future__ import annotations

import argparse
import sys

from .errors import PlanningError
from .planner import (
    PlanRequest,
    load_floorplan,
    load_placements,
    plan,
    verify_placements,
    write_solution,
)
from .render_svg import render_plan_svg, render_verify_svg
from .sampling import SamplingConfig
from .visibility import Constraints

_DEFAULTS = SamplingConfig()


def _add_sampling_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--boundary-spacing", type=float, metavar="M",
                   default=_DEFAULTS.boundary_spacing,
                   help="wall sample spacing in meters (default %(default)s)")
    p.add_argument("--fov-y-deg", type=float, metavar="A",
                   default=_DEFAULTS.fov_y_deg,
                   help="vertical field of view, degrees (default %(default)s)")
    p.add_argument("--camera-height-floor", type=float, metavar="M",
                   default=_DEFAULTS.h_floor,
                   help="camera height above the floor (default %(default)s)")
    p.add_argument("--camera-height-ceiling", type=float, metavar="M",
                   default=_DEFAULTS.h_ceiling,
                   help="camera distance below the ceiling (default %(default)s)")


def _add_constraint_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-range", type=float, metavar="M", default=None,
                   help="maximum camera-to-wall distance; unlimited if omitted")
    p.add_argument("--min-range", type=float, metavar="M", default=_DEFAULTS.d_min,
                   help="physical minimum camera-to-wall distance "
                        "(the field-of-view standoff always applies)")
    p.add_argument("--max-angle-deg", type=float, metavar="A", default=None,
                   help="maximum angle between wall normal and camera direction; "
                        "unlimited if omitted")


def _sampling_from_args(args: argparse.Namespace, grid: bool) -> SamplingConfig:
    return SamplingConfig(
        boundary_spacing=args.boundary_spacing,
        grid_spacing=args.grid_spacing if grid else _DEFAULTS.grid_spacing,
        d_min=args.min_range,
        fov_y_deg=args.fov_y_deg,
        h_floor=args.camera_height_floor,
        h_ceiling=args.camera_height_ceiling,
    )


def _constraints_from_args(args: argparse.Namespace) -> Constraints:
    return Constraints(d_max=args.max_range, theta_max_deg=args.max_angle_deg)


def cmd_plan(args: argparse.Namespace) -> int:
    req = PlanRequest(
        floorplan=load_floorplan(args.floorplan),
        sampling=_sampling_from_args(args, grid=True),
        constraints=_constraints_from_args(args),
        solver_choice=args.solver,
        time_budget_s=args.time_budget,
    )
    report = plan(req)
    sol = report.solution
    print(f"boundary points:  {report.stats.n_boundary}")
    print(f"candidate sites:  {report.stats.n_candidates}")
    print(f"visibility pairs: {report.stats.pair_count} "
          f"(built in {report.stats.matrix_build_time:.2f}s)")
    print(f"cameras: {sol.objective} [{sol.status.value}] "
          f"(solved in {report.stats.solve_time:.2f}s)")
    for k, c in enumerate(sol.chosen):
        pos = report.candidates[c].position
        print(f"  camera {k + 1}: ({pos.x:.3f}, {pos.y:.3f})")
    if report.missed:
        print(f"uncoverable boundary points: {len(report.missed)}")
    if args.out:
        write_solution(report, args.out)
        print(f"wrote {args.out}")
    if args.svg:
        from pathlib import Path
        Path(args.svg).write_text(render_plan_svg(report))
        print(f"wrote {args.svg}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    f = load_floorplan(args.floorplan)
    placements = load_placements(args.placements)
    report = verify_placements(
        f,
        placements,
        sampling=_sampling_from_args(args, grid=False),
        constraints=_constraints_from_args(args),
    )
    n = len(report.boundary)
    print(f"cameras: {len(report.placements)}")
    print(f"boundary points: {n}")
    print(f"covered: {len(report.covered)}   missed: {len(report.missed)}")
    for i in range(len(report.placements)):
        pos = report.placements[i]
        print(f"  camera {i + 1} at ({pos.x:.3f}, {pos.y:.3f}) "
              f"covers {len(report.per_camera[i])} points")
    if args.svg:
        from pathlib import Path
        Path(args.svg).write_text(render_verify_svg(report, f))
        print(f"wrote {args.svg}")
    return 1 if report.missed else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must be HOST:PORT, got {args.bind!r}", file=sys.stderr)
        return 2
    app = create_app(static_dir=args.static_dir)
    uvicorn.run(app, host=host, port=int(port_text))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camplan",
        description="Minimal 360-degree camera placement for 2D floorplans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="compute a minimal camera placement")
    p_plan.add_argument("floorplan", help="floorplan JSON document (path)")
    _add_constraint_flags(p_plan)
    p_plan.add_argument("--grid-spacing", type=float, metavar="M",
                        default=_DEFAULTS.grid_spacing,
                        help="candidate grid spacing in meters (default %(default)s)")
    _add_sampling_flags(p_plan)
    p_plan.add_argument("--solver", choices=("greedy", "exact"), default="exact",
                        help="greedy heuristic or exact branch-and-bound")
    p_plan.add_argument("--time-budget", type=float, metavar="S", default=60.0,
                        help="exact-solver budget in seconds (default %(default)s)")
    p_plan.add_argument("--out", metavar="FILE", help="write the solution document")
    p_plan.add_argument("--svg", metavar="FILE", help="write an SVG rendering")
    p_plan.set_defaults(func=cmd_plan)

    p_verify = sub.add_parser(
        "verify", help="check manual camera placements against the sampled walls"
    )
    p_verify.add_argument("floorplan", help="floorplan JSON document (path)")
    p_verify.add_argument("placements",
                          help="JSON with 'placements' (or a solution document)")
    _add_constraint_flags(p_verify)
    _add_sampling_flags(p_verify)
    p_verify.add_argument("--svg", metavar="FILE", help="write an SVG rendering")
    p_verify.set_defaults(func=cmd_verify)

    p_serve = sub.add_parser("serve", help="run the HTTP planning service")
    p_serve.add_argument("--bind", metavar="HOST:PORT", default="127.0.0.1:8000",
                         help="listen address (default %(default)s)")
    p_serve.add_argument("--static-dir", metavar="DIR", default=None,
                         help="also serve this directory at / (the web client)")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PlanningError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
