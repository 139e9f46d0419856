"""Mercator and Gall-Peters projections of the unit sphere, their distortion,
projected region areas, and spherical triangle angle sums.

Angles are radians throughout; the GeoJSON helpers in :mod:`pancake.io`
convert from degrees.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .geometry import GeometryError, Point2

MERCATOR_MAX_LAT = math.radians(85.0)
DENSIFY_STEP = math.radians(0.5)
SQRT2 = math.sqrt(2.0)


class ProjectionKind(enum.Enum):
    MERCATOR = "mercator"
    GALL_PETERS = "gall-peters"

    @classmethod
    def parse(cls, text) -> "ProjectionKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        if key in ("mercator", "merc"):
            return cls.MERCATOR
        if key in ("gall-peters", "gallpeters", "peters", "gp"):
            return cls.GALL_PETERS
        raise ValueError(f"unknown projection {text!r}")


@dataclass(frozen=True)
class GeoPoint:
    """Latitude and longitude in radians.

    The poles themselves are allowed (spherical triangles need them); the
    Mercator map rejects them separately.
    """

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise GeometryError("non-finite geographic coordinate")
        if abs(self.lat) > math.pi / 2:
            raise GeometryError(f"latitude {self.lat} outside [-pi/2, pi/2]")
        if abs(self.lon) > math.pi:
            raise GeometryError(f"longitude {self.lon} outside [-pi, pi]")

    @classmethod
    def from_degrees(cls, lat: float, lon: float) -> "GeoPoint":
        return cls(math.radians(lat), math.radians(lon))

    def unit_vector(self) -> np.ndarray:
        c = math.cos(self.lat)
        return np.array([c * math.cos(self.lon), c * math.sin(self.lon), math.sin(self.lat)])


@dataclass(frozen=True)
class DistortionReport:
    conformality_defect: float
    area_defect: float


def _check(kind: ProjectionKind, p: GeoPoint, max_lat: float):
    if kind is ProjectionKind.MERCATOR and abs(p.lat) > max_lat:
        raise GeometryError(
            f"latitude {math.degrees(p.lat):.6g} deg beyond the Mercator limit "
            f"of {math.degrees(max_lat):.6g} deg")


def project(kind: ProjectionKind, p: GeoPoint, max_lat: float = MERCATOR_MAX_LAT) -> Point2:
    _check(kind, p, max_lat)
    if kind is ProjectionKind.MERCATOR:
        # asinh(tan(lat)) == ln tan(pi/4 + lat/2), exact at the equator
        return Point2(p.lon, math.asinh(math.tan(p.lat)))
    return Point2(p.lon / SQRT2, SQRT2 * math.sin(p.lat))


def jacobian(kind: ProjectionKind, p: GeoPoint, max_lat: float = MERCATOR_MAX_LAT) -> np.ndarray:
    """``[[dx/dlon, dx/dlat], [dy/dlon, dy/dlat]]`` in closed form."""
    _check(kind, p, max_lat)
    if kind is ProjectionKind.MERCATOR:
        return np.array([[1.0, 0.0], [0.0, 1.0 / math.cos(p.lat)]])
    return np.array([[1.0 / SQRT2, 0.0], [0.0, SQRT2 * math.cos(p.lat)]])


def numeric_jacobian(kind: ProjectionKind, p: GeoPoint, h: float = 1e-6,
                     max_lat: float = MERCATOR_MAX_LAT) -> np.ndarray:
    """Central finite differences of :func:`project`."""
    def f(lat, lon):
        q = project(kind, GeoPoint(lat, lon), max_lat + 2 * h)
        return np.array([q.x, q.y])

    d_lon = (f(p.lat, p.lon + h) - f(p.lat, p.lon - h)) / (2 * h)
    d_lat = (f(p.lat + h, p.lon) - f(p.lat - h, p.lon)) / (2 * h)
    return np.column_stack([d_lon, d_lat])


# area of the image per unit area of the sphere at the equator
AREA_CONSTANT = {ProjectionKind.MERCATOR: 1.0, ProjectionKind.GALL_PETERS: 1.0}


def distortion_report(kind: ProjectionKind, p: GeoPoint,
                      max_lat: float = MERCATOR_MAX_LAT) -> DistortionReport:
    """Deviation from a similarity (angles) and from constant area scale.

    The longitude column is divided by ``cos(lat)`` so that the Jacobian
    acts on an orthonormal frame of the sphere's tangent plane.
    """
    J = jacobian(kind, p, max_lat)
    c = math.cos(p.lat)
    if c < 1e-12:
        raise GeometryError("distortion is undefined at the poles")
    Jc = J @ np.diag([1.0 / c, 1.0])
    s = np.linalg.svd(Jc, compute_uv=False)
    conformality = float(s[0] / s[1] - 1.0)
    area = float(abs(abs(np.linalg.det(J)) / (AREA_CONSTANT[kind] * c) - 1.0))
    return DistortionReport(conformality, area)


def area_scale(kind: ProjectionKind, p: GeoPoint, max_lat: float = MERCATOR_MAX_LAT) -> float:
    """Local ratio of map area to spherical area."""
    return abs(float(np.linalg.det(jacobian(kind, p, max_lat)))) / math.cos(p.lat)


def distortion_grid(kind: ProjectionKind, lat_range, lon_range, step_deg: float,
                    max_lat: float = MERCATOR_MAX_LAT) -> List[Tuple[float, float, float, float]]:
    """Rows ``(lon_deg, lat_deg, conformality_defect, area_defect)`` on a grid.

    Latitudes the projection cannot handle are skipped.
    """
    rows = []
    lats = np.arange(lat_range[0], lat_range[1] + 0.5 * step_deg, step_deg)
    lons = np.arange(lon_range[0], lon_range[1] + 0.5 * step_deg, step_deg)
    for lat in lats:
        lat = float(round(lat, 10))
        if abs(lat) >= 90 or (kind is ProjectionKind.MERCATOR and math.radians(abs(lat)) > max_lat):
            continue
        for lon in lons:
            lon = float(round(lon, 10))
            rep = distortion_report(kind, GeoPoint.from_degrees(lat, lon), max_lat)
            rows.append((lon, lat, rep.conformality_defect, rep.area_defect))
    return rows


# -- regions -----------------------------------------------------------------


def _to_geo(v: np.ndarray) -> GeoPoint:
    v = v / np.linalg.norm(v)
    lat = math.asin(max(-1.0, min(1.0, float(v[2]))))
    lon = math.atan2(float(v[1]), float(v[0]))
    return GeoPoint(lat, lon)


def densify(region: Sequence[GeoPoint], max_step: float = DENSIFY_STEP) -> List[GeoPoint]:
    """Insert points along each great-circle edge so no step exceeds ``max_step``."""
    out: List[GeoPoint] = []
    n = len(region)
    for k in range(n):
        a, b = region[k], region[(k + 1) % n]
        out.append(a)
        va, vb = a.unit_vector(), b.unit_vector()
        omega = math.atan2(float(np.linalg.norm(np.cross(va, vb))), float(va @ vb))
        steps = int(math.ceil(omega / max_step))
        if steps <= 1:
            continue
        s = math.sin(omega)
        for t in range(1, steps):
            f = t / steps
            v = (math.sin((1 - f) * omega) * va + math.sin(f * omega) * vb) / s
            out.append(_to_geo(v))
    return out


def _shoelace(xy: Sequence[Point2]) -> float:
    n = len(xy)
    return 0.5 * abs(sum(xy[k].x * xy[(k + 1) % n].y - xy[(k + 1) % n].x * xy[k].y
                         for k in range(n)))


def region_map_area(kind: ProjectionKind, region: Sequence[GeoPoint],
                    max_step: float = DENSIFY_STEP, max_lat: float = MERCATOR_MAX_LAT) -> float:
    """Planar area of the projected region after densifying its edges."""
    if len(region) < 3:
        raise GeometryError("a region needs at least 3 vertices")
    for k, p in enumerate(region):
        try:
            _check(kind, p, max_lat)
        except GeometryError as e:
            raise GeometryError(f"vertex {k}: {e}") from None
    return _shoelace([project(kind, p, max_lat) for p in densify(region, max_step)])


def spherical_polygon_area(region: Sequence[GeoPoint]) -> float:
    """Area on the unit sphere from the signed excess of a triangle fan.

    Uses the solid-angle formula
    ``tan(E/2) = a.(b x c) / (1 + a.b + b.c + c.a)`` for each triangle.
    Valid for regions smaller than a hemisphere.
    """
    vs = [p.unit_vector() for p in region]
    total = 0.0
    a = vs[0]
    for b, c in zip(vs[1:-1], vs[2:]):
        num = float(a @ np.cross(b, c))
        den = 1.0 + float(a @ b) + float(b @ c) + float(c @ a)
        total += 2.0 * math.atan2(num, den)
    return abs(total)


def spherical_triangle_angle_sum(a: GeoPoint, b: GeoPoint, c: GeoPoint) -> float:
    """Sum of the interior angles, measured between great-circle tangents."""
    va, vb, vc = a.unit_vector(), b.unit_vector(), c.unit_vector()
    if abs(float(va @ np.cross(vb, vc))) < 1e-12:
        raise GeometryError("degenerate spherical triangle (vertices on one great circle)")

    def angle(at, p, q):
        tp = p - (at @ p) * at
        tq = q - (at @ q) * at
        return math.atan2(float(np.linalg.norm(np.cross(tp, tq))), float(tp @ tq))

    return angle(va, vb, vc) + angle(vb, vc, va) + angle(vc, va, vb)
