"""Planar primitives: points, canonical lines, simple polygons, halfplane
clipping and the two distance metrics (Euclidean and Manhattan).

Everything here is an immutable value or a pure function.  Coordinates are
plain doubles; no arbitrary precision arithmetic is used.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

log = logging.getLogger(__name__)

# Relative area below which a clipped piece counts as a degenerate sliver.
SLIVER_RTOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric input (domain error)."""


class Side(enum.IntEnum):
    NEGATIVE = -1
    ON = 0
    POSITIVE = 1

    def opposite(self) -> "Side":
        return Side(-int(self))


class MetricKind(enum.Enum):
    EUCLIDEAN = "l2"
    MANHATTAN = "l1"

    @classmethod
    def parse(cls, text: str) -> "MetricKind":
        key = text.strip().lower()
        aliases = {
            "l2": cls.EUCLIDEAN, "euclidean": cls.EUCLIDEAN,
            "l1": cls.MANHATTAN, "manhattan": cls.MANHATTAN, "taxicab": cls.MANHATTAN,
        }
        try:
            return aliases[key]
        except KeyError:
            raise GeometryError(f"unknown metric {text!r}") from None


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinate in ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y


def as_point(p) -> Point2:
    return p if isinstance(p, Point2) else Point2(float(p[0]), float(p[1]))


@dataclass(frozen=True)
class Line2:
    """The locus ``a*x + b*y = c`` with ``a**2 + b**2 == 1``.

    The sign convention (``a > 0``, or ``a == 0`` and ``b > 0``) picks one
    representative per geometric line, so equal lines compare equal.  The
    positive side is the one the normal ``(a, b)`` points into.
    """

    a: float
    b: float
    c: float

    @classmethod
    def from_coeffs(cls, a: float, b: float, c: float) -> "Line2":
        if not all(math.isfinite(v) for v in (a, b, c)):
            raise GeometryError("non-finite line coefficients")
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise GeometryError("line normal (a, b) must be non-zero")
        a, b, c = a / norm, b / norm, c / norm
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        # avoid -0.0 so that equal lines are bit-identical
        return cls(a + 0.0, b + 0.0, c + 0.0)

    @classmethod
    def through(cls, p: Point2, direction: Tuple[float, float]) -> "Line2":
        """Line through ``p`` running along ``direction``."""
        dx, dy = direction
        a, b = -dy, dx
        norm = math.hypot(a, b)
        if norm == 0.0:
            raise GeometryError("zero direction vector")
        a, b = a / norm, b / norm
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return cls(a + 0.0, b + 0.0, a * p.x + b * p.y + 0.0)

    @classmethod
    def through_points(cls, p: Point2, q: Point2) -> "Line2":
        return cls.through(p, (q.x - p.x, q.y - p.y))

    def value(self, p: Point2) -> float:
        return self.a * p.x + self.b * p.y - self.c

    @property
    def direction(self) -> Tuple[float, float]:
        # positive side lies to the left of this direction
        return (self.b, -self.a)


def side_of(line: Line2, p: Point2, eps_on: float = 0.0) -> Side:
    v = line.a * p.x + line.b * p.y - line.c
    if v > eps_on:
        return Side.POSITIVE
    if v < -eps_on:
        return Side.NEGATIVE
    return Side.ON


def l2_distance(p: Point2, q: Point2) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def l1_distance(p: Point2, q: Point2) -> float:
    return abs(p.x - q.x) + abs(p.y - q.y)


def distance(p: Point2, q: Point2, metric: MetricKind) -> float:
    if metric is MetricKind.EUCLIDEAN:
        return l2_distance(p, q)
    return l1_distance(p, q)


def zone_contains(center: Point2, radius: float, metric: MetricKind, p: Point2) -> bool:
    """True iff ``p`` is within ``radius`` of ``center`` under ``metric``.

    The Euclidean zone is a disk, the Manhattan zone a diamond; both are
    closed.
    """
    if not (radius > 0 and math.isfinite(radius)):
        raise GeometryError(f"zone radius must be positive, got {radius}")
    return distance(center, p, metric) <= radius


# -- polygons ---------------------------------------------------------------


def signed_area(vertices: Sequence[Point2]) -> float:
    n = len(vertices)
    s = 0.0
    for k in range(n):
        p, q = vertices[k], vertices[(k + 1) % n]
        s += p.x * q.y - q.x * p.y
    return 0.5 * s


def _orient(p: Point2, q: Point2, r: Point2) -> float:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def _on_segment(p: Point2, q: Point2, r: Point2) -> bool:
    return min(p.x, q.x) <= r.x <= max(p.x, q.x) and min(p.y, q.y) <= r.y <= max(p.y, q.y)


def segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def is_self_intersecting(vertices: Sequence[Point2]) -> bool:
    n = len(vertices)
    edges = [(vertices[k], vertices[(k + 1) % n]) for k in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                # neighbours share a vertex; only a fold-back counts
                a, b = edges[i]
                c, d = edges[j]
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                if _orient(other_i, shared, other_j) == 0:
                    di = (other_i.x - shared.x, other_i.y - shared.y)
                    dj = (other_j.x - shared.x, other_j.y - shared.y)
                    if di[0] * dj[0] + di[1] * dj[1] > 0:
                        return True
                continue
            if segments_intersect(*edges[i], *edges[j]):
                return True
    return False


@dataclass(frozen=True)
class SimplePolygon:
    """Counterclockwise simple polygon, closed implicitly.

    Clockwise input is reversed on construction.  Self-intersecting or
    zero-area input raises :class:`GeometryError`.
    """

    vertices: Tuple[Point2, ...]

    def __init__(self, vertices: Iterable, validate: bool = True):
        pts = [as_point(v) for v in vertices]
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts = pts[:-1]
        if validate:
            if len(pts) < 3:
                raise GeometryError("a polygon needs at least 3 vertices")
            if is_self_intersecting(pts):
                raise GeometryError("polygon is self-intersecting")
            if signed_area(pts) < 0:
                pts.reverse()
            if signed_area(pts) <= 0:
                raise GeometryError("polygon has zero area")
        object.__setattr__(self, "vertices", tuple(pts))

    @classmethod
    def trusted(cls, vertices: Sequence[Point2]) -> "SimplePolygon":
        """Wrap vertices already known to form a valid CCW polygon."""
        return cls(vertices, validate=False)

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        n = len(vs)
        for k in range(n):
            yield vs[k], vs[(k + 1) % n]

    def bbox(self) -> Tuple[float, float, float, float]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox()
        return math.hypot(x1 - x0, y1 - y0)

    def as_tuples(self) -> List[Tuple[float, float]]:
        return [(p.x, p.y) for p in self.vertices]


def polygon_area(poly: SimplePolygon) -> float:
    """Shoelace area of a valid polygon."""
    if not isinstance(poly, SimplePolygon):
        poly = SimplePolygon(poly)
    return abs(signed_area(poly.vertices))


def contains_point(poly: SimplePolygon, p: Point2, tol: float = 0.0) -> bool:
    """Closed containment test; points within ``tol`` of the boundary count."""
    for a, b in poly.edges():
        if _point_segment_distance(p, a, b) <= tol:
            return True
    inside = False
    for a, b in poly.edges():
        if (a.y > p.y) != (b.y > p.y):
            x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x_cross > p.x:
                inside = not inside
    return inside


def _point_segment_distance(p: Point2, a: Point2, b: Point2) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return l2_distance(p, a)
    t = max(0.0, min(1.0, ((p.x - a.x) * dx + (p.y - a.y) * dy) / L2))
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def clip_polygon(
    poly: SimplePolygon,
    line: Line2,
    side: Side,
    audit: Optional[List[str]] = None,
) -> List[SimplePolygon]:
    """Intersect ``poly`` with the closed halfplane on ``side`` of ``line``.

    Non-convex input may produce several pieces.  Vertices lying on the line
    are treated as if the line were shifted infinitesimally into the kept
    side, so every crossing is proper and edges running along the line never
    glue pieces together through a zero-width bridge.  Ties along the line
    are broken by how fast the shifted crossing moves.

    Crossing points are always interpolated from the edge's start vertex in
    ring order, so clipping to the positive and negative sides yields
    bit-identical cut vertices.  Pieces smaller than ``SLIVER_RTOL`` of the
    input area are dropped and noted in ``audit``.
    """
    if side is Side.ON:
        raise GeometryError("clip side must be POSITIVE or NEGATIVE")
    sgn = int(side)
    verts = poly.vertices
    n = len(verts)
    scale = max(1.0, abs(line.c), *(abs(p.x) + abs(p.y) for p in verts))
    snap = 4 * 2.0 ** -52 * scale
    d = []
    for p in verts:
        v = line.value(p)
        d.append(0.0 if abs(v) <= snap else sgn * v)

    if all(v >= 0 for v in d):
        return [poly]
    if all(v <= 0 for v in d):
        return []

    # left of (ux, uy) is the kept side
    ux, uy = (line.b, -line.a) if sgn > 0 else (-line.b, line.a)

    def crossing(i: int, j: int):
        """Crossing point of edge i->j and its sort key along the line."""
        if d[i] == 0 or d[j] == 0:
            on, inside = (i, j) if d[i] == 0 else (j, i)
            z, p = verts[on], verts[inside]
            slope = ((p.x - z.x) * ux + (p.y - z.y) * uy) / d[inside]
            return z, (z.x * ux + z.y * uy, slope)
        p, q = verts[i], verts[j]
        t = d[i] / (d[i] - d[j])
        x = Point2(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y))
        return x, (x.x * ux + x.y * uy, 0.0)

    k0 = next(k for k in range(n) if d[k] <= 0 < d[(k + 1) % n])
    chains: List[List[Point2]] = []
    entry_keys: List[tuple] = []
    exit_keys: List[tuple] = []
    cur: List[Point2] = []
    for step in range(n):
        i = (k0 + step) % n
        j = (i + 1) % n
        if d[i] > 0 >= d[j]:
            x, k = crossing(i, j)
            cur.append(x)
            exit_keys.append(k)
            chains.append(cur)
            cur = []
        elif d[i] <= 0 < d[j]:
            x, k = crossing(i, j)
            cur = [x]
            entry_keys.append(k)
        if d[j] > 0:
            cur.append(verts[j])

    events = sorted(
        [(k, 0, c) for c, k in enumerate(exit_keys)]
        + [(k, 1, c) for c, k in enumerate(entry_keys)]
    )
    link = {}
    for k in range(0, len(events), 2):
        (_, kind0, c0), (_, kind1, c1) = events[k], events[k + 1]
        if kind0 != 0 or kind1 != 1:
            raise GeometryError(f"inconsistent crossing order clipping by {line}")
        link[c0] = c1

    pieces: List[SimplePolygon] = []
    total = abs(signed_area(verts))
    seen = set()
    for ci in range(len(chains)):
        if ci in seen:
            continue
        loop: List[Point2] = []
        cj = ci
        while cj not in seen:
            seen.add(cj)
            loop.extend(chains[cj])
            cj = link[cj]
        loop = _dedupe_ring(loop)
        area = signed_area(loop) if len(loop) >= 3 else 0.0
        if area <= SLIVER_RTOL * total:
            msg = f"dropped sliver piece (area {area:.3g}) clipping by {line}"
            log.debug(msg)
            if audit is not None:
                audit.append(msg)
            continue
        pieces.append(SimplePolygon.trusted(loop))
    return pieces


def _dedupe_ring(pts: List[Point2]) -> List[Point2]:
    out: List[Point2] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def split_polygon(
    poly: SimplePolygon, line: Line2, audit: Optional[List[str]] = None
) -> Tuple[List[SimplePolygon], List[SimplePolygon]]:
    """Pieces on the (positive, negative) side of ``line``."""
    return (
        clip_polygon(poly, line, Side.POSITIVE, audit),
        clip_polygon(poly, line, Side.NEGATIVE, audit),
    )
