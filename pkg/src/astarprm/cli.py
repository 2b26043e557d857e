"""Command line interface: ``plan``, ``bench``, ``genmap`` and ``render``.

Exit codes: 0 success, 1 configuration/input error, 2 a planning cell (or a
single ``plan`` run) found no path.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path as FsPath

from . import artifacts
from .errors import ConfigError, PlanningError
from .experiment import (
    DEFAULT_GENERATOR,
    ExperimentConfig,
    MatrixCell,
    default_matrix,
    resolve_endpoints,
    run_experiment,
    write_cell_svg,
)
from .grid_map import generate_warehouse, load_map
from .planners import ALGORITHMS, PlannerSpec, plan
from .svg import render_svg

EXIT_OK, EXIT_CONFIG, EXIT_NO_PATH = 0, 1, 2


def _point(text: str):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}") from None
    return (x, y)


def _add_map_args(p: argparse.ArgumentParser):
    p.add_argument("--map", help="ASCII (.#SG) or PGM map file; default: generated warehouse")
    p.add_argument("--width", type=int, default=DEFAULT_GENERATOR["width"])
    p.add_argument("--height", type=int, default=DEFAULT_GENERATOR["height"])
    p.add_argument("--map-seed", type=int, default=DEFAULT_GENERATOR["seed"])
    p.add_argument("--density", type=float, default=DEFAULT_GENERATOR["density"])
    p.add_argument("--start", type=_point, help="X,Y in metres")
    p.add_argument("--goal", type=_point, help="X,Y in metres")


def _load_grid(args):
    try:
        if args.map:
            return load_map(args.map)
        return generate_warehouse(args.width, args.height, args.map_seed, args.density)
    except (OSError, PlanningError, ValueError) as exc:
        raise ConfigError(f"invalid map: {exc}") from exc


def cmd_plan(args) -> int:
    grid = _load_grid(args)
    S, G = resolve_endpoints(grid, args.start, args.goal)
    spec = PlannerSpec(
        algorithm=args.algo,
        n_samples=args.samples,
        k_neighbors=args.k,
        heuristic=args.heuristic,
        query_heuristic=args.query_heuristic,
        seed=args.seed,
        postprocess_enabled=False if args.no_postprocess else (True if args.postprocess else None),
    )
    outcome = plan(grid, S, G, spec)
    summary = {"algorithm": args.algo, "start": list(S), "goal": list(G), **outcome.report.as_dict()}
    print(json.dumps(summary, indent=2))
    if args.out:
        out = artifacts.ensure_dir(args.out)
        if outcome.path is not None:
            artifacts.write_path(outcome.path, out / "path.csv")
        if outcome.raw_path is not None:
            artifacts.write_path(outcome.raw_path, out / "raw_path.csv")
        if outcome.roadmap is not None:
            artifacts.write_vertices(outcome.roadmap.vertices, out / "vertices.csv")
            artifacts.write_edges(outcome.roadmap, out / "edges.csv")
        write_cell_svg(grid, outcome, out / "plan.svg")
        (out / "report.json").write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if outcome.path is not None else EXIT_NO_PATH


def cmd_bench(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
        overrides = {}
    else:
        if args.algo:
            matrix = [
                MatrixCell(a, n, k, False if args.no_postprocess else None)
                for a in args.algo
                for n in (args.samples or [1000])
                for k in (args.k or [10])
            ]
        else:
            matrix = default_matrix()
        gen = None
        if not args.map:
            gen = {"width": args.width, "height": args.height, "seed": args.map_seed, "density": args.density}
        cfg = ExperimentConfig(matrix=matrix, map_path=args.map, generator=gen)
        overrides = {"start": args.start, "goal": args.goal}
    for key, val in {**overrides, "n_trials": args.trials, "base_seed": args.seed,
                     "output_dir": args.out, "jobs": args.jobs}.items():
        if val is not None:
            setattr(cfg, key, val)
    if cfg.n_trials < 3:
        raise ConfigError("--trials must be >= 3")
    result = run_experiment(cfg)
    print((result.output_dir / "tables.md").read_text())
    for c in result.failed_cells:
        print(f"no successful trial in cell {c.cell.slug}", file=sys.stderr)
    return result.exit_code


def cmd_genmap(args) -> int:
    try:
        grid = generate_warehouse(args.width, args.height, args.seed, args.density)
    except (PlanningError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    dest = FsPath(args.out)
    if dest.suffix.lower() == ".pgm":
        dest.write_bytes(grid.to_pgm())
    else:
        dest.write_text(grid.to_ascii())
    print(f"wrote {grid.width}x{grid.height} map ({1 - grid.free_fraction():.1%} blocked) to {dest}")
    return EXIT_OK


def cmd_render(args) -> int:
    grid = _load_grid(args)
    roadmap = vertices = None
    try:
        if args.vertices and args.edges:
            roadmap = artifacts.read_roadmap(args.vertices, args.edges)
        elif args.vertices:
            vertices = artifacts.read_vertices(args.vertices).vertices
        paths = [artifacts.read_path(p) for p in args.path or []]
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read artifacts: {exc}") from exc
    FsPath(args.out).write_text(render_svg(grid, roadmap, paths, args.path, vertices=vertices))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="astarprm", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="single planning run")
    _add_map_args(p)
    p.add_argument("--algo", choices=ALGORITHMS, default="astar-prm")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--heuristic", choices=("manhattan", "euclidean"), default="manhattan",
                   help="heuristic used for dynamic connection")
    p.add_argument("--query-heuristic", choices=("euclidean", "manhattan", "zero"),
                   default="euclidean", help="roadmap A* heuristic (manhattan is scaled by 1/sqrt2)")
    post = p.add_mutually_exclusive_group()
    post.add_argument("--no-postprocess", action="store_true")
    post.add_argument("--postprocess", action="store_true", help="force shortcut + smoothing")
    p.add_argument("--out", help="directory for path/roadmap CSVs, SVG and report.json")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("bench", help="seeded experiment matrix")
    _add_map_args(p)
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--algo", nargs="+", choices=ALGORITHMS)
    p.add_argument("--samples", type=int, nargs="+")
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="base seed; trial i uses seed + i")
    p.add_argument("--jobs", type=int)
    p.add_argument("--no-postprocess", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("genmap", help="write a generated warehouse map")
    p.add_argument("--width", type=int, default=DEFAULT_GENERATOR["width"])
    p.add_argument("--height", type=int, default=DEFAULT_GENERATOR["height"])
    p.add_argument("--seed", type=int, default=DEFAULT_GENERATOR["seed"])
    p.add_argument("--density", type=float, default=DEFAULT_GENERATOR["density"])
    p.add_argument("--out", required=True, help="*.pgm for binary PGM, anything else for ASCII")
    p.set_defaults(func=cmd_genmap)

    p = sub.add_parser("render", help="SVG from saved map/roadmap/path artifacts")
    _add_map_args(p)
    p.add_argument("--vertices")
    p.add_argument("--edges")
    p.add_argument("--path", action="append")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PlanningError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
