"""CSV import/export of vertex sets, roadmap edges and paths."""

from __future__ import annotations

import csv
from pathlib import Path as FsPath

from .grid_map import Point
from .roadmap import Roadmap
from .sampling import VertexSet
from .search import Path

VERTEX_COLUMNS = ["index", "x", "y", "provenance"]
EDGE_COLUMNS = ["u", "v", "weight"]
PATH_COLUMNS = ["index", "x", "y"]


def _write(rows, columns, dest):
    with open(dest, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def _read(src) -> list[dict]:
    with open(src, newline="") as fh:
        return list(csv.DictReader(fh))


def write_vertices(vs: VertexSet, dest):
    _write(vs.to_csv_rows(), VERTEX_COLUMNS, dest)


def read_vertices(src) -> VertexSet:
    rows = sorted(_read(src), key=lambda r: int(r["index"]))
    return VertexSet(
        [Point(float(r["x"]), float(r["y"])) for r in rows],
        [r.get("provenance", "global") for r in rows],
    )


def write_edges(rm: Roadmap, dest):
    _write(rm.edge_rows(), EDGE_COLUMNS, dest)


def read_roadmap(vertices_src, edges_src) -> Roadmap:
    vs = read_vertices(vertices_src)
    edges = [(int(r["u"]), int(r["v"]), float(r["weight"])) for r in _read(edges_src)]
    return Roadmap.from_edges(vs, edges)


def write_path(path: Path, dest):
    rows = ({"index": i, "x": repr(p.x), "y": repr(p.y)} for i, p in enumerate(path.waypoints))
    _write(rows, PATH_COLUMNS, dest)


def read_path(src) -> Path:
    rows = sorted(_read(src), key=lambda r: int(r["index"]))
    return Path([(float(r["x"]), float(r["y"])) for r in rows])


def ensure_dir(path) -> FsPath:
    p = FsPath(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
