"""Seeded experiment matrix: run trials, aggregate, write CSV/Markdown/SVG."""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path as FsPath

from . import artifacts
from .errors import ConfigError, PlanningError
from .grid_map import OccupancyGrid, Point, generate_warehouse, is_free, load_map, warehouse_endpoints
from .metrics import PlanReport, aggregate, trimmed_stats
from .planners import ALGORITHMS, ROADMAP_ALGORITHMS, PlannerSpec, plan
from .svg import render_svg

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "trial_id",
    "algorithm",
    "n_samples",
    "k",
    "seed",
    "success",
    "path_length_m",
    "time_s",
    "node_expansion",
    "smoothness_deg_per_m",
    "max_curvature_per_m",
    "connection_rate",
]
TIMING_COLUMNS = ("time_s",)
CSV_PREAMBLE = "# time_s is wall-clock and non-deterministic; every other column is reproducible from seed\n"

# CSV column -> PlanReport attribute
REPORT_COLUMNS = {
    "path_length_m": "path_length",
    "time_s": "wall_time",
    "node_expansion": "node_expansion",
    "smoothness_deg_per_m": "smoothness",
    "max_curvature_per_m": "max_curvature",
    "connection_rate": "connection_rate",
}

DEFAULT_GENERATOR = {"width": 897, "height": 550, "seed": 7, "density": 0.2}


@dataclass(frozen=True)
class MatrixCell:
    algorithm: str
    n_samples: int = 1000
    k_neighbors: int = 10
    postprocess: bool | None = None

    @property
    def label(self) -> str:
        spec = self.spec(0)
        default_post = spec.algorithm == "astar-prm"
        if spec.postprocess == default_post:
            return self.algorithm
        return self.algorithm + ("+post" if spec.postprocess else "-raw")

    @property
    def slug(self) -> str:
        return f"{self.label}_n{self.n_samples}_k{self.k_neighbors}"

    def spec(self, seed: int) -> PlannerSpec:
        return PlannerSpec(
            algorithm=self.algorithm,
            n_samples=self.n_samples,
            k_neighbors=self.k_neighbors,
            seed=seed,
            postprocess_enabled=self.postprocess,
        )


def default_matrix() -> list[MatrixCell]:
    """Grid baselines plus both roadmap planners over |V| in {500, 1000, 3000}, k in {5, 10, 20}."""
    cells = [MatrixCell("dijkstra-grid"), MatrixCell("astar-grid")]
    for algo in ROADMAP_ALGORITHMS:
        for n, k in ((500, 10), (1000, 10), (3000, 10), (1000, 5), (1000, 20)):
            cells.append(MatrixCell(algo, n, k))
    cells.append(MatrixCell("prm", 1000, 10, postprocess=True))
    return cells


@dataclass
class ExperimentConfig:
    matrix: list[MatrixCell] = field(default_factory=default_matrix)
    map_path: str | None = None
    generator: dict | None = None
    start: Point | None = None
    goal: Point | None = None
    n_trials: int = 12
    base_seed: int = 0
    output_dir: str = "results"
    jobs: int = 1
    baseline: tuple[int, int] = (1000, 10)

    def __post_init__(self):
        if not self.matrix:
            raise ConfigError("experiment matrix is empty")
        if self.n_trials < 3:
            raise ConfigError("n_trials must be >= 3")
        if self.map_path is None and self.generator is None:
            self.generator = dict(DEFAULT_GENERATOR)
        for cell in self.matrix:
            if cell.algorithm not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {cell.algorithm!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        try:
            matrix = []
            for entry in d.pop("matrix", None) or []:
                if isinstance(entry, dict):
                    matrix.append(MatrixCell(**entry))
                else:
                    matrix.append(MatrixCell(*entry))
            src = d.pop("map_source", None)
            if isinstance(src, str):
                d.setdefault("map_path", src)
            elif isinstance(src, dict):
                d.setdefault("generator", src)
            for key in ("start", "goal"):
                if d.get(key) is not None:
                    d[key] = Point(*map(float, d[key]))
            if "baseline" in d:
                d["baseline"] = tuple(d["baseline"])
            return cls(matrix=matrix or default_matrix(), **d)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid experiment config: {exc}") from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                return cls.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["matrix"] = [asdict(c) for c in self.matrix]
        return d

    def load_grid(self) -> tuple[OccupancyGrid, Point, Point]:
        try:
            if self.map_path is not None:
                grid = load_map(self.map_path)
            else:
                g = self.generator
                grid = generate_warehouse(g["width"], g["height"], g["seed"], g["density"])
        except (OSError, KeyError, PlanningError, ValueError) as exc:
            raise ConfigError(f"invalid map: {exc}") from exc
        S, G = resolve_endpoints(grid, self.start, self.goal)
        return grid, S, G


def resolve_endpoints(grid: OccupancyGrid, start=None, goal=None) -> tuple[Point, Point]:
    """Explicit endpoints win, then map markers, then the warehouse convention."""
    dS, dG = grid.start, grid.goal
    if (dS is None or dG is None) and grid.width >= 100 and grid.height >= 100:
        wS, wG = warehouse_endpoints(grid.width * grid.resolution, grid.height * grid.resolution)
        dS, dG = dS or wS, dG or wG
    S = Point(*map(float, start)) if start is not None else dS
    G = Point(*map(float, goal)) if goal is not None else dG
    if S is None or G is None:
        raise ConfigError("start/goal not given and the map carries no S/G markers")
    for name, p in (("start", S), ("goal", G)):
        if not is_free(grid, p):
            raise ConfigError(f"{name} {tuple(p)} is not in free space")
    return S, G


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def trial_row(cell: MatrixCell, trial: int, seed: int, report: PlanReport) -> dict:
    row = {
        "trial_id": f"{cell.slug}_t{trial:02d}",
        "algorithm": cell.label,
        "n_samples": cell.n_samples,
        "k": cell.k_neighbors,
        "seed": seed,
        "success": int(report.success),
    }
    for col, attr in REPORT_COLUMNS.items():
        row[col] = _num(getattr(report, attr)) if report.success or attr == "wall_time" else ""
    if not report.success:
        row["node_expansion"] = _num(report.node_expansion)
        row["connection_rate"] = _num(report.connection_rate)
    return row


def run_trial(grid, S, G, cell: MatrixCell, trial: int, seed: int, keep_outcome: bool = False):
    outcome = plan(grid, S, G, cell.spec(seed))
    row = trial_row(cell, trial, seed, outcome.report)
    return row, outcome.report, (outcome if keep_outcome else None)


_worker_state: dict = {}


def _init_worker(grid, S, G):
    _worker_state.update(grid=grid, S=S, G=G)


def _worker(args):
    cell, trial, seed, keep = args
    st = _worker_state
    return run_trial(st["grid"], st["S"], st["G"], cell, trial, seed, keep)


@dataclass
class CellResult:
    cell: MatrixCell
    rows: list[dict]
    reports: list[PlanReport]
    aggregate: object = None
    svg_path: str | None = None

    @property
    def successes(self) -> int:
        return sum(r.success for r in self.reports)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    cells: list[CellResult]
    output_dir: FsPath

    @property
    def failed_cells(self) -> list[CellResult]:
        return [c for c in self.cells if c.successes == 0]

    @property
    def exit_code(self) -> int:
        return 2 if self.failed_cells else 0


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run every matrix cell for ``n_trials`` seeds (``base_seed + trial``).

    Writes ``trials.csv``, ``aggregates.csv``, ``tables.md``, ``config.json``
    and one SVG per cell (first successful trial) into ``cfg.output_dir``.
    """
    try:
        out = artifacts.ensure_dir(cfg.output_dir)
        probe = out / ".write_test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {cfg.output_dir} is not writable: {exc}") from exc
    grid, S, G = cfg.load_grid()

    jobs = [
        (cell, t, cfg.base_seed + t, t == 0)
        for cell in cfg.matrix
        for t in range(cfg.n_trials)
    ]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=(grid, S, G)) as ex:
            results = list(ex.map(_worker, jobs))
    else:
        results = [run_trial(grid, S, G, *job) for job in jobs]

    cells: list[CellResult] = []
    for ci, cell in enumerate(cfg.matrix):
        chunk = results[ci * cfg.n_trials : (ci + 1) * cfg.n_trials]
        cr = CellResult(cell, [r[0] for r in chunk], [r[1] for r in chunk])
        ok = [r for r in cr.reports if r.success]
        if len(ok) >= 3:
            cr.aggregate = aggregate(ok)
        svg_dir = artifacts.ensure_dir(out / "svg")
        first = chunk[0][2]
        if first is None or first.path is None:
            # re-plan the first successful seed so the overlay shows a path
            idx = next((i for i, r in enumerate(cr.reports) if r.success), None)
            if idx is not None:
                first = plan(grid, S, G, cell.spec(cfg.base_seed + idx))
        cr.svg_path = str(svg_dir / f"{cell.slug}.svg")
        write_cell_svg(grid, first, cr.svg_path)
        cells.append(cr)
        log.info("%s: %d/%d successes", cell.slug, cr.successes, cfg.n_trials)

    result = ExperimentResult(cfg, cells, out)
    write_trials_csv([row for c in cells for row in c.rows], out / "trials.csv")
    write_aggregates_csv(cells, out / "aggregates.csv")
    (out / "tables.md").write_text(markdown_tables(result))
    (out / "config.json").write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")
    return result


def write_cell_svg(grid, outcome, dest):
    paths, labels = [], []
    roadmap = None
    if outcome is not None:
        roadmap = outcome.roadmap
        if outcome.raw_path is not None:
            paths.append(outcome.raw_path)
            labels.append("raw")
        if outcome.path is not None and outcome.path is not outcome.raw_path:
            paths.append(outcome.path)
            labels.append("post-processed")
    FsPath(dest).write_text(render_svg(grid, roadmap, paths, labels))


def write_trials_csv(rows, dest):
    with open(dest, "w", newline="") as fh:
        fh.write(CSV_PREAMBLE)
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def read_trials_csv(src) -> list[dict]:
    with open(src, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


AGG_METRICS = ("path_length", "wall_time", "node_expansion", "smoothness", "max_curvature", "connection_rate")


def write_aggregates_csv(cells: list[CellResult], dest):
    cols = ["algorithm", "n_samples", "k", "n_trials", "successes", "fluctuation_pct"]
    for m in AGG_METRICS:
        cols += [f"{m}_mean", f"{m}_std"]
    with open(dest, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for c in cells:
            row = {
                "algorithm": c.cell.label,
                "n_samples": c.cell.n_samples,
                "k": c.cell.k_neighbors,
                "n_trials": len(c.reports),
                "successes": c.successes,
                "fluctuation_pct": "",
            }
            if c.aggregate is not None:
                row["fluctuation_pct"] = _num(c.aggregate.fluctuation)
                for m in AGG_METRICS:
                    row[f"{m}_mean"] = _num(c.aggregate.trimmed_mean.get(m))
                    row[f"{m}_std"] = _num(c.aggregate.trimmed_std.get(m))
            writer.writerow(row)


def recompute_from_csv(rows: list[dict], label: str, n: int, k: int, column: str) -> tuple[float, float]:
    """Trimmed mean/std of one metric column for one cell, straight from trial rows."""
    vals = [
        float(r[column])
        for r in rows
        if r["algorithm"] == label and int(r["n_samples"]) == n and int(r["k"]) == k
        and r["success"] == "1"
    ]
    return trimmed_stats(vals)


def _fmt(v, digits=2) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "n/a"
    return f"{v:,.{digits}f}"


def markdown_tables(result: ExperimentResult) -> str:
    """Tables shaped like the classic comparison: one per (|V|, k) plus a summary."""
    cfg = result.config
    groups: dict[tuple[int, int], list[CellResult]] = {}
    for c in result.cells:
        groups.setdefault((c.cell.n_samples, c.cell.k_neighbors), []).append(c)

    lines = [
        "# Planner comparison",
        "",
        f"Trimmed means over {cfg.n_trials} trials (one max and one min dropped per metric); "
        f"seeds {cfg.base_seed}..{cfg.base_seed + cfg.n_trials - 1}.",
        "",
    ]
    for (n, k), cells in groups.items():
        lines += [
            f"## |V|={n}, k={k}",
            "",
            "| Algorithm | Path Length(m) | Execution time(s) | Node Expansion | Path Smoothness (°/m) | Success |",
            "|---|---|---|---|---|---|",
        ]
        for c in cells:
            m = c.aggregate.trimmed_mean if c.aggregate else {}
            lines.append(
                f"| {c.cell.label} | {_fmt(m.get('path_length'))} | {_fmt(m.get('wall_time'), 3)} "
                f"| {_fmt(m.get('node_expansion'), 0)} | {_fmt(m.get('smoothness'))} "
                f"| {c.successes}/{len(c.reports)} |"
            )
        lines.append("")

    base_n, base_k = cfg.baseline
    lines += [
        "## Performance summary",
        "",
        "| Algorithm | Path Fluctuation | Max Curvature Mean (1/m) | Time Overhead | Effective Connection Rate |",
        "|---|---|---|---|---|",
    ]
    labels = []
    for c in result.cells:
        if c.cell.algorithm in ROADMAP_ALGORITHMS and c.cell.label not in labels:
            labels.append(c.cell.label)
    for label in labels:
        mine = {(c.cell.n_samples, c.cell.k_neighbors): c for c in result.cells if c.cell.label == label}
        base = mine.get((base_n, base_k))
        ba = base.aggregate if base else None
        fluct = f"{ba.fluctuation:.2f}% (|V|={base_n})" if ba else "n/a"
        curv = _fmt(ba.trimmed_mean.get("max_curvature"), 3) if ba else "n/a"

        ns = sorted(n for n, k in mine if k == base_k and mine[(n, k)].aggregate)
        overhead = "n/a"
        if len(ns) >= 2:
            t0 = mine[(ns[0], base_k)].aggregate.trimmed_mean["wall_time"]
            t1 = mine[(ns[-1], base_k)].aggregate.trimmed_mean["wall_time"]
            overhead = f"{100 * (t1 / t0 - 1):+.0f}% (|V|={ns[0]}→{ns[-1]})"

        ks = sorted(k for n, k in mine if n == base_n and mine[(n, k)].aggregate)
        rate = "n/a"
        if ks:
            r = [mine[(base_n, k)].aggregate.trimmed_mean["connection_rate"] for k in ks]
            rate = " → ".join(f"{100 * v:.1f}%" for v in r) + f" (k={'→'.join(map(str, ks))})"
        lines.append(f"| {label} | {fluct} | {curv} | {overhead} | {rate} |")
    lines.append("")
    return "\n".join(lines)
