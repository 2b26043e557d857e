"""SVG overlays of maps, roadmaps and paths."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .grid_map import OccupancyGrid

PATH_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def blocked_runs(grid: OccupancyGrid):
    """Yield ``(x0, y, length)`` for each horizontal run of blocked cells."""
    for y, row in enumerate(grid.blocked.tolist()):
        x = 0
        while x < grid.width:
            if row[x]:
                x0 = x
                while x < grid.width and row[x]:
                    x += 1
                yield x0, y, x - x0
            else:
                x += 1


def render_svg(
    grid: OccupancyGrid,
    roadmap=None,
    paths=(),
    labels=None,
    vertices=None,
) -> str:
    """Draw obstacles, optional roadmap vertices/edges and any number of paths.

    ``vertices`` may be given without a roadmap (a bare sample set).  Each
    path becomes one ``<polyline>`` in its own colour.
    """
    res = grid.resolution
    W, H = grid.width * res, grid.height * res
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=_fmt(W),
        height=_fmt(H),
        viewBox=f"0 0 {_fmt(W)} {_fmt(H)}",
        style="background:#ffffff",
    )
    obstacles = ET.SubElement(svg, "g", id="obstacles", fill="#404040")
    for x0, y, n in blocked_runs(grid):
        ET.SubElement(
            obstacles,
            "rect",
            x=_fmt(x0 * res),
            y=_fmt(y * res),
            width=_fmt(n * res),
            height=_fmt(res),
        )

    if roadmap is not None:
        vertices = roadmap.vertices.vertices
        edges = ET.SubElement(svg, "g", id="edges", stroke="#9ecae1")
        edges.set("stroke-width", "0.4")
        for u, v in sorted(roadmap.edges):
            a, b = vertices[u], vertices[v]
            ET.SubElement(
                edges, "line", x1=_fmt(a.x), y1=_fmt(a.y), x2=_fmt(b.x), y2=_fmt(b.y)
            )
    if vertices is not None:
        dots = ET.SubElement(svg, "g", id="vertices", fill="#3182bd")
        for p in vertices:
            ET.SubElement(dots, "circle", cx=_fmt(p[0]), cy=_fmt(p[1]), r="1.2")

    for i, path in enumerate(paths):
        pts = path.waypoints if hasattr(path, "waypoints") else path
        line = ET.SubElement(
            svg,
            "polyline",
            points=" ".join(f"{_fmt(p[0])},{_fmt(p[1])}" for p in pts),
            fill="none",
            stroke=PATH_COLORS[i % len(PATH_COLORS)],
        )
        line.set("stroke-width", "2")
        if labels is not None and i < len(labels):
            ET.SubElement(line, "title").text = str(labels[i])

    return ET.tostring(svg, encoding="unicode", xml_declaration=False) + "\n"
