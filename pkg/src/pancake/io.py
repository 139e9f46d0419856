"""Reading and writing populations, regions, plans and projection outputs.

Populations are CSV (``x,y,subpop``) or GeoJSON points carrying a boolean
``subpop`` property.  Planar regions are GeoJSON polygons.  Geographic
regions are GeoJSON polygons in longitude/latitude degrees.  All writers are
deterministic: fixed key order, fixed float formatting, fixed feature order.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .geometry import GeometryError, Point2, SimplePolygon, signed_area
from .hamsandwich import PopulationPoint
from .projections import GeoPoint

TRUE_WORDS = {"1", "true", "t", "yes", "y"}
FALSE_WORDS = {"0", "false", "f", "no", "n", ""}


class InputError(ValueError):
    """Unreadable or malformed input file."""


def _read_text(path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror or e})") from None


def load_json(path) -> dict:
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[:e.pos].encode("utf-8"))
        raise InputError(f"{path}: malformed JSON at byte offset {offset}: {e.msg}") from None


def _parse_bool(value, where: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)) and value in (0, 1):
        return bool(value)
    word = str(value).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise InputError(f"{where}: cannot read {value!r} as a boolean")


def _parse_float(value, where: str) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{where}: {value!r} is not a number") from None
    if not math.isfinite(x):
        raise InputError(f"{where}: non-finite coordinate {value!r}")
    return x


# -- populations ----------------------------------------------------------


def read_population(path) -> List[PopulationPoint]:
    path = Path(path)
    if path.suffix.lower() in (".geojson", ".json"):
        return _population_from_geojson(load_json(path), str(path))
    return _population_from_csv(_read_text(path), str(path))


def _population_from_csv(text: str, name: str) -> List[PopulationPoint]:
    reader = csv.DictReader(_io.StringIO(text))
    fields = [f.strip().lower() for f in (reader.fieldnames or [])]
    if "x" not in fields or "y" not in fields:
        raise InputError(f"{name}: CSV header must contain x and y columns")
    reader.fieldnames = fields
    points = []
    for line, row in enumerate(reader, start=2):
        where = f"{name}:{line}"
        x = _parse_float(row.get("x"), where)
        y = _parse_float(row.get("y"), where)
        sub = _parse_bool(row.get("subpop", "0") or "0", where)
        points.append(PopulationPoint(Point2(x, y), sub))
    return points


def _features(obj, name: str) -> List[dict]:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError(f"{name}: not a GeoJSON object")
    kind = obj["type"]
    if kind == "FeatureCollection":
        feats = obj.get("features")
        if not isinstance(feats, list):
            raise InputError(f"{name}: FeatureCollection without a features list")
        return feats
    if kind == "Feature":
        return [obj]
    return [{"type": "Feature", "geometry": obj, "properties": {}}]


def _population_from_geojson(obj, name: str) -> List[PopulationPoint]:
    points = []
    for k, feat in enumerate(_features(obj, name)):
        geom = feat.get("geometry") or {}
        if geom.get("type") != "Point":
            raise InputError(f"{name}: feature {k} is not a Point")
        coords = geom.get("coordinates")
        if not isinstance(coords, list) or len(coords) < 2:
            raise InputError(f"{name}: feature {k} has bad coordinates")
        where = f"{name}: feature {k}"
        props = feat.get("properties") or {}
        points.append(PopulationPoint(
            Point2(_parse_float(coords[0], where), _parse_float(coords[1], where)),
            _parse_bool(props.get("subpop", False), where)))
    return points


def write_population_csv(points: Sequence[PopulationPoint], path) -> None:
    lines = ["x,y,subpop"]
    for p in points:
        lines.append(f"{p.location.x!r},{p.location.y!r},{int(p.in_subpop)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- planar regions ----------------------------------------------------------


def read_region(path) -> SimplePolygon:
    name = str(path)
    feats = _features(load_json(path), name)
    polys = [f.get("geometry") or {} for f in feats]
    polys = [g for g in polys if g.get("type") == "Polygon"]
    if len(polys) != 1:
        raise InputError(f"{name}: expected exactly one Polygon, found {len(polys)}")
    rings = polys[0].get("coordinates") or []
    if len(rings) != 1:
        raise InputError(f"{name}: region polygons may not have holes")
    try:
        return SimplePolygon([(_parse_float(c[0], name), _parse_float(c[1], name)) for c in rings[0]])
    except GeometryError as e:
        raise InputError(f"{name}: {e}") from None


def bounding_region(points: Sequence[PopulationPoint], pad: float = 0.05) -> SimplePolygon:
    """Axis-aligned rectangle around the points, padded by ``pad`` of its size."""
    xs = [p.location.x for p in points] or [0.0]
    ys = [p.location.y for p in points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    m = pad * max(x1 - x0, y1 - y0, 1.0)
    return SimplePolygon([(x0 - m, y0 - m), (x1 + m, y0 - m), (x1 + m, y1 + m), (x0 - m, y1 + m)])


def ring_coords(poly: SimplePolygon) -> List[List[float]]:
    """Closed counterclockwise coordinate ring for GeoJSON."""
    pts = list(poly.vertices)
    if signed_area(pts) < 0:
        pts.reverse()
    ring = [[p.x, p.y] for p in pts]
    ring.append(list(ring[0]))
    return ring


def polygon_geojson(poly: SimplePolygon) -> dict:
    return {"type": "Polygon", "coordinates": [ring_coords(poly)]}


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


# -- district plans ------------------------------------------------------------


def plan_geojson(plan, tree, flags: Optional[Dict[int, dict]] = None) -> dict:
    """One MultiPolygon feature per district, ordered by ``district_id``."""
    feats = []
    for d, (group, members, (a, b)) in enumerate(zip(plan.groups, plan.members, plan.counts)):
        polys = [[ring_coords(poly)] for cid in group for poly in tree.cells[cid].pieces]
        props = {"district_id": d, "a_count": a, "b_count": b,
                 "cells": list(group), "members": list(members)}
        if flags and d in flags:
            props.update(flags[d])
        feats.append({"type": "Feature", "properties": props,
                      "geometry": {"type": "MultiPolygon", "coordinates": polys}})
    return {"type": "FeatureCollection", "features": feats}


def read_plan_members(path) -> List[Tuple[int, ...]]:
    """District memberships stored in a plan file, indexed by district id."""
    name = str(path)
    feats = _features(load_json(path), name)
    out: Dict[int, Tuple[int, ...]] = {}
    for k, f in enumerate(feats):
        props = f.get("properties") or {}
        try:
            out[int(props["district_id"])] = tuple(int(m) for m in props["members"])
        except (KeyError, TypeError, ValueError):
            raise InputError(f"{name}: feature {k} lacks district_id/members") from None
    return [out[k] for k in sorted(out)]


def plan_polygons(path) -> List[List[SimplePolygon]]:
    """District geometries from a plan file (one list of pieces per district)."""
    name = str(path)
    feats = sorted(_features(load_json(path), name),
                   key=lambda f: int((f.get("properties") or {}).get("district_id", 0)))
    out = []
    for f in feats:
        geom = f.get("geometry") or {}
        polys = geom.get("coordinates", []) if geom.get("type") == "MultiPolygon" else [geom.get("coordinates", [])]
        out.append([SimplePolygon([tuple(c) for c in rings[0]], validate=False) for rings in polys if rings])
    return out


# -- geographic regions ----------------------------------------------------


def read_geo_regions(path) -> List[Tuple[str, List[List[GeoPoint]]]]:
    """Named regions, each a list of exterior rings in lon/lat degrees."""
    name = str(path)
    out = []
    for k, f in enumerate(_features(load_json(path), name)):
        geom = f.get("geometry") or {}
        props = f.get("properties") or {}
        label = str(props.get("name", f"feature{k}"))
        if geom.get("type") == "Polygon":
            polys = [geom.get("coordinates")]
        elif geom.get("type") == "MultiPolygon":
            polys = geom.get("coordinates")
        else:
            raise InputError(f"{name}: feature {k} is not a Polygon or MultiPolygon")
        parts = []
        for rings in polys or []:
            if not rings:
                continue
            ring = rings[0]
            if len(ring) > 1 and ring[0] == ring[-1]:
                ring = ring[:-1]
            pts = []
            for j, c in enumerate(ring):
                where = f"{name}: feature {k} vertex {j}"
                lon, lat = _parse_float(c[0], where), _parse_float(c[1], where)
                try:
                    pts.append(GeoPoint.from_degrees(lat, lon))
                except GeometryError as e:
                    raise InputError(f"{where}: {e}") from None
            parts.append(pts)
        out.append((label, parts))
    return out


def ring_to_lonlat(ring: Sequence[GeoPoint]) -> List[List[float]]:
    return [[math.degrees(p.lon), math.degrees(p.lat)] for p in ring]


def write_distortion_csv(rows: Iterable[Tuple[float, float, float, float]], path) -> None:
    lines = ["lon_deg,lat_deg,conformality_defect,area_defect"]
    for lon, lat, conf, area in rows:
        lines.append(f"{lon:.6f},{lat:.6f},{conf:.12e},{area:.12e}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- structural GeoJSON validation -------------------------------------------


def geojson_problems(obj) -> List[str]:
    """Structural problems: types, closed rings, counterclockwise exteriors."""
    problems: List[str] = []

    def ring_ok(ring, where, exterior):
        if not isinstance(ring, list) or len(ring) < 4:
            problems.append(f"{where}: ring needs at least 4 positions")
            return
        if ring[0] != ring[-1]:
            problems.append(f"{where}: ring is not closed")
        pts = [Point2(float(c[0]), float(c[1])) for c in ring[:-1]]
        area = signed_area(pts)
        if exterior and area <= 0:
            problems.append(f"{where}: exterior ring is not counterclockwise")
        if not exterior and area >= 0:
            problems.append(f"{where}: hole is not clockwise")

    def geom_ok(g, where):
        t = g.get("type") if isinstance(g, dict) else None
        if t == "Point":
            c = g.get("coordinates")
            if not (isinstance(c, list) and len(c) >= 2):
                problems.append(f"{where}: bad Point")
        elif t == "Polygon":
            for r, ring in enumerate(g.get("coordinates") or []):
                ring_ok(ring, f"{where} ring {r}", r == 0)
        elif t == "MultiPolygon":
            for p, rings in enumerate(g.get("coordinates") or []):
                for r, ring in enumerate(rings):
                    ring_ok(ring, f"{where} polygon {p} ring {r}", r == 0)
        else:
            problems.append(f"{where}: unsupported geometry type {t!r}")

    if not isinstance(obj, dict):
        return ["not a JSON object"]
    if obj.get("type") == "FeatureCollection":
        feats = obj.get("features")
        if not isinstance(feats, list):
            return ["FeatureCollection without features list"]
        for k, f in enumerate(feats):
            if not isinstance(f, dict) or f.get("type") != "Feature":
                problems.append(f"feature {k}: not a Feature")
                continue
            if "properties" not in f:
                problems.append(f"feature {k}: missing properties")
            geom_ok(f.get("geometry"), f"feature {k}")
    elif obj.get("type") == "Feature":
        geom_ok(obj.get("geometry"), "feature")
    else:
        geom_ok(obj, "geometry")
    return problems
