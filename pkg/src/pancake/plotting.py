"""SVG figures for district plans and projected regions.

Rendering is byte-reproducible: the SVG id salt is fixed and no creation
date is written.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon as PolygonPatch  # noqa: E402

from .geometry import Line2  # noqa: E402
from .projections import GeoPoint, ProjectionKind, densify, project  # noqa: E402

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
)
RC = {"svg.hashsalt": "pancake", "svg.fonttype": "path", "path.simplify": False}


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _cut_segments(tree) -> list:
    """Boundary edges of each positive child that lie on its parent's cut."""
    segs = []
    for node, cut in sorted(tree.cuts.items()):
        line: Line2 = cut.line
        child = tree.cells[2 * node + 1]
        tol = 1e-9 * max(1.0, tree.region.diameter())
        for poly in child.pieces:
            for a, b in poly.edges():
                if abs(line.value(a)) <= tol and abs(line.value(b)) <= tol:
                    segs.append(((a.x, b.x), (a.y, b.y)))
    return segs


def plot_plan(tree, plan, path, title: str = "") -> None:
    """Districts filled by colour, leaf cells outlined, cut lines dashed."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 6))
        for d, group in enumerate(plan.groups):
            colour = PALETTE[d % len(PALETTE)]
            for cid in group:
                for poly in tree.cells[cid].pieces:
                    ax.add_patch(PolygonPatch(poly.as_tuples(), closed=True, facecolor=colour,
                                              alpha=0.45, edgecolor="#333333", linewidth=0.6))
        for xs, ys in _cut_segments(tree):
            ax.plot(xs, ys, linestyle="--", color="black", linewidth=0.8)
        ax.add_patch(PolygonPatch(tree.region.as_tuples(), closed=True, fill=False,
                                  edgecolor="black", linewidth=1.4))
        pts = tree.points
        if pts:
            ax.scatter([p.location.x for p in pts if not p.in_subpop],
                       [p.location.y for p in pts if not p.in_subpop], s=6, color="#222222")
            ax.scatter([p.location.x for p in pts if p.in_subpop],
                       [p.location.y for p in pts if p.in_subpop], s=10, color="#c00000", marker="^")
        x0, y0, x1, y1 = tree.region.bbox()
        m = 0.03 * max(x1 - x0, y1 - y0)
        ax.set_xlim(x0 - m, x1 + m)
        ax.set_ylim(y0 - m, y1 + m)
        ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        _save(fig, path)


def projected_outline(kind: ProjectionKind, ring) -> Tuple[list, list]:
    pts = [project(kind, p) for p in densify(ring)]
    xs = [p.x for p in pts] + [pts[0].x]
    ys = [p.y for p in pts] + [pts[0].y]
    return xs, ys


def plot_projection(kind: ProjectionKind, regions: Sequence, path, title: str = "") -> None:
    """Projected region outlines over a 30-degree graticule."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(7, 6))
        lat_lim = 80.0 if kind is ProjectionKind.MERCATOR else 90.0
        for lon in range(-180, 181, 30):
            line = [project(kind, _geo(lat, lon)) for lat in _frange(-lat_lim, lat_lim, 2.0)]
            ax.plot([p.x for p in line], [p.y for p in line], color="#cccccc", linewidth=0.4)
        for lat in range(-60, 61, 30):
            line = [project(kind, _geo(lat, lon)) for lon in (-180.0, 180.0)]
            ax.plot([p.x for p in line], [p.y for p in line], color="#cccccc", linewidth=0.4)
        for k, (name, rings) in enumerate(regions):
            for ring in rings:
                xs, ys = projected_outline(kind, ring)
                ax.plot(xs, ys, color=PALETTE[k % len(PALETTE)], linewidth=1.0)
        ax.set_aspect("equal")
        ax.set_axis_off()
        if title:
            ax.set_title(title)
        _save(fig, path)


def _geo(lat_deg: float, lon_deg: float) -> GeoPoint:
    return GeoPoint(math.radians(lat_deg), math.radians(lon_deg))


def _frange(a: float, b: float, step: float):
    n = int(round((b - a) / step))
    return [a + k * step for k in range(n + 1)]


__all__ = ["PALETTE", "plot_plan", "plot_projection", "projected_outline"]
