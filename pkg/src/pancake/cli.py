"""Command-line entry point: ``pancake <subcommand> ...``.

Exit codes: 0 success or INSIDE, 1 OUTSIDE, 2 usage or input error,
3 size cap exceeded, 4 internal invariant violated.

Every subcommand accepts ``--config FILE``, a JSON object whose keys are
flag names (``out-dir`` or ``out_dir``); flags given on the command line
win.  ``PANCAKE_OUT_DIR`` sets the output directory when no flag or config
entry does.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import io as pio
from .districting import (
    PlanError,
    Strategy,
    audit_plan,
    build_adjacency,
    contiguous_min_depth,
    enumerate_outcomes,
    group_cells,
    recursive_bisect,
)
from .geometry import (
    GeometryError,
    MetricKind,
    Point2,
    SimplePolygon,
    contains_point,
    l1_distance,
    l2_distance,
    zone_contains,
)
from .hamsandwich import CutSearchError, PopulationPoint, SizeCapError, find_cut, verify_cut
from .projections import (
    MERCATOR_MAX_LAT,
    GeoPoint,
    ProjectionKind,
    densify,
    distortion_grid,
    project,
    region_map_area,
    spherical_polygon_area,
    spherical_triangle_angle_sum,
)
from .plotting import plot_plan, plot_projection

OUT_DIR_ENV = "PANCAKE_OUT_DIR"
EARTH_RADIUS_KM = 6371.0088

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 1, 2, 3, 4

log = logging.getLogger("pancake")


class InvariantError(RuntimeError):
    """A computed result failed its own post-condition check."""


@dataclass(frozen=True)
class RunConfig:
    seed: int
    depth: int
    districts: int
    strategy: Strategy
    deviation_cap: float
    points: Optional[Path]
    region: Optional[Path]
    out_dir: Path

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.districts < 1:
            raise ValueError("districts must be >= 1")
        if self.districts > 2 ** self.depth:
            raise ValueError(f"districts n={self.districts} exceeds 2**depth = {2 ** self.depth}")


# -- argument types ----------------------------------------------------------


def _pair(text: str):
    try:
        x, y = (float(t) for t in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y but got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite value in {text!r}")
    return x, y


def _positive(text) -> float:
    x = float(text)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _nonneg_int(text) -> int:
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return k


def _pos_int(text) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return k


def _nonneg_float(text) -> float:
    x = float(text)
    if not (x >= 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return x


# -- parser ------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="pancake", description="Pancake-cut districting toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    subs: Dict[str, argparse.ArgumentParser] = {}

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", type=Path, help="JSON file of flag defaults")
        subs[name] = p
        return p

    p = add("zone", "Distance from a zone centre under both metrics and the containment verdict.")
    p.add_argument("--center", type=_pair, help="X,Y of the zone centre")
    p.add_argument("--radius", type=_positive, help="zone radius")
    p.add_argument("--metric", choices=["l1", "l2"], default="l2")
    p.add_argument("--point", type=_pair, help="X,Y of the point to test")

    p = add("cut", "Find one line halving both populations.")
    p.add_argument("--points", type=Path, help="population CSV or GeoJSON")
    p.add_argument("--eps-on", type=_nonneg_float, default=0.0,
                   help="distance under which a point counts as on the line (noisy data)")
    p.add_argument("--out", type=Path, help="write the cut as JSON here")

    def district_like(p):
        p.add_argument("--points", type=Path, help="population CSV or GeoJSON")
        p.add_argument("--region", type=Path, help="region GeoJSON polygon (default: padded bounding box)")
        p.add_argument("--depth", type=_nonneg_int, default=None, help="bisection rounds i")
        p.add_argument("--districts", type=_pos_int, default=None, help="number of districts n")
        p.add_argument("--eps-on", type=_nonneg_float, default=0.0,
                       help="distance under which a point counts as on a cut line")

    p = add("district", "Recursive bisection into 2**i cells grouped into n districts.")
    district_like(p)
    p.add_argument("--strategy", default="index", help="index | greedy | exhaustive")
    p.add_argument("--seed", type=int, default=0, help="seed for --random populations")
    p.add_argument("--random", type=_pos_int, default=None,
                   help="ignore --points; draw this many uniform points inside the region")
    p.add_argument("--subpop-fraction", type=float, default=0.4,
                   help="chance that a --random point joins the subpopulation")
    p.add_argument("--contiguous", action="store_true",
                   help="search for the smallest depth <= --depth giving connected districts")
    p.add_argument("--simply-connected", action="store_true",
                   help="with --contiguous, also forbid districts enclosing others")
    p.add_argument("--deviation-cap", type=_nonneg_float, default=1.0,
                   help="with --contiguous, largest allowed relative deviation")
    p.add_argument("--candidates", type=_pos_int, default=8, help="balanced cuts compared per cell")
    p.add_argument("--name", default="district", help="output file stem")
    p.add_argument("--out-dir", type=Path, default=None)

    p = add("enumerate", "Count distinct districting outcomes by brute force.")
    district_like(p)
    p.add_argument("--dump", type=Path, help="write every distinct plan to this JSON file")

    p = add("project", "Project lon/lat regions and report areas and distortion.")
    p.add_argument("--input", type=Path, help="GeoJSON regions in lon/lat degrees")
    p.add_argument("--kind", default="both", help="mercator | gall-peters | both")
    p.add_argument("--grid-step", type=_positive, default=1.0, help="distortion grid step in degrees")
    p.add_argument("--max-lat", type=_positive, default=math.degrees(MERCATOR_MAX_LAT),
                   help="Mercator latitude limit in degrees")
    p.add_argument("--out-dir", type=Path, default=None)

    p = add("triangle", "Interior angle sum of a spherical triangle.")
    for v in "abc":
        p.add_argument(f"--{v}", type=_pair, help="LAT,LON in degrees")

    return parser, subs


def _apply_config(parser, subs, argv):
    args = parser.parse_args(argv)
    cfg_path = getattr(args, "config", None)
    if cfg_path is None:
        return args
    cfg = pio.load_json(cfg_path)
    if not isinstance(cfg, dict):
        raise pio.InputError(f"{cfg_path}: config must be a JSON object")
    sp = subs[args.command]
    dests = {a.dest for a in sp._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in dests or dest in ("help", "config"):
            raise pio.InputError(f"{cfg_path}: unknown option {key!r} for {args.command}")
        if isinstance(value, list):
            value = ",".join(str(v) for v in value)
        if not isinstance(value, (str, bool)) and value is not None:
            value = str(value)
        defaults[dest] = value
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def _require(parser, args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_"), None) is None]
    if missing:
        parser.error(f"{args.command}: missing " + ", ".join("--" + n for n in missing))


def _out_dir(args) -> Path:
    d = args.out_dir if args.out_dir is not None else Path(os.environ.get(OUT_DIR_ENV, "."))
    d.mkdir(parents=True, exist_ok=True)
    return d


# -- subcommands ---------------------------------------------------------------


def cmd_zone(args) -> int:
    center, p = Point2(*args.center), Point2(*args.point)
    metric = MetricKind.parse(args.metric)
    inside = zone_contains(center, args.radius, metric, p)
    print(f"l2={l2_distance(center, p):.2f} l1={l1_distance(center, p):.2f} "
          f"{'INSIDE' if inside else 'OUTSIDE'}")
    return EXIT_OK if inside else EXIT_NEGATIVE


def cmd_cut(args) -> int:
    points = pio.read_population(args.points)
    cut = find_cut(points, eps_on=args.eps_on)
    rep = verify_cut(points, cut)
    if not rep.balanced:
        raise InvariantError(f"solver returned an unbalanced cut: {rep}")
    line = cut.line
    print(f"line a={line.a:.12g} b={line.b:.12g} c={line.c:.12g}")
    print(f"total {rep.pos_total}/{rep.neg_total} subpop {rep.pos_subpop}/{rep.neg_subpop} BALANCED")
    if args.out:
        doc = {"line": {"a": line.a, "b": line.b, "c": line.c},
               "on_line": [[k, int(s)] for k, s in cut.on_line], "eps_on": cut.eps_on,
               "positive": {"total": rep.pos_total, "subpop": rep.pos_subpop},
               "negative": {"total": rep.neg_total, "subpop": rep.neg_subpop}}
        Path(args.out).write_text(pio.dumps(doc), encoding="utf-8")
    return EXIT_OK


def _random_points(region: SimplePolygon, count: int, seed: int, frac: float) -> List[PopulationPoint]:
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = region.bbox()
    out: List[PopulationPoint] = []
    while len(out) < count:
        x, y = rng.uniform(x0, x1), rng.uniform(y0, y1)
        sub = rng.random() < frac
        p = Point2(float(x), float(y))
        if contains_point(region, p):
            out.append(PopulationPoint(p, bool(sub)))
    return out


def _load_inputs(args, allow_random=False):
    if allow_random and args.random is not None:
        if args.region is None:
            raise pio.InputError("--random needs --region")
        region = pio.read_region(args.region)
        points = _random_points(region, args.random, args.seed, args.subpop_fraction)
        return region, points
    if args.points is None:
        raise pio.InputError("--points is required")
    points = pio.read_population(args.points)
    region = pio.read_region(args.region) if args.region else pio.bounding_region(points)
    return region, points


def _leaf_check(tree) -> dict:
    """Largest gap between a leaf's count and |P|/2**i, per population."""
    n_a, n_b = tree.population_sizes()
    leaves = 2 ** tree.depth
    worst = [0.0, 0.0]
    for cell in tree.leaves:
        a = len(cell.point_indices)
        b = sum(1 for k in cell.point_indices if tree.points[k].in_subpop)
        worst[0] = max(worst[0], abs(a - n_a / leaves))
        worst[1] = max(worst[1], abs(b - n_b / leaves))
    return {"total": worst[0], "subpop": worst[1], "below_one": worst[0] < 1 and worst[1] < 1}


def cmd_district(args) -> int:
    cfg = RunConfig(seed=args.seed, depth=args.depth, districts=args.districts,
                    strategy=Strategy.parse(args.strategy), deviation_cap=args.deviation_cap,
                    points=args.points, region=args.region, out_dir=_out_dir(args))
    region, points = _load_inputs(args, allow_random=True)
    if not points:
        raise pio.InputError("the population is empty")

    found_depth = None
    if args.contiguous:
        res = contiguous_min_depth(region, points, cfg.districts, cfg.deviation_cap,
                                   i_max=cfg.depth, simply_connected=args.simply_connected,
                                   candidates=args.candidates, eps_on=args.eps_on)
        if res is None:
            print(f"no contiguous plan with deviation <= {cfg.deviation_cap} up to depth {cfg.depth}")
            return EXIT_NEGATIVE
        found_depth, plan = res
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tree = recursive_bisect(region, points, found_depth, args.candidates, args.eps_on)
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            tree = recursive_bisect(region, points, cfg.depth, args.candidates, args.eps_on)
        for w in caught:
            log.warning("%s", w.message)
        plan = None

    adj = build_adjacency(tree)
    if plan is None:
        plan = group_cells(tree, cfg.districts, cfg.strategy, adj)
    report = audit_plan(plan, points)
    leaf = _leaf_check(tree)
    if not report.within_bound:
        raise InvariantError(f"deviation exceeds the analytic bound: {report.as_dict()}")
    if not leaf["below_one"]:
        raise InvariantError(f"a leaf is off by one person or more: {leaf}")

    flags = {}
    districts = []
    for d, (group, (a, b)) in enumerate(zip(plan.groups, plan.counts)):
        flags[d] = {"connected": adj.is_connected(group),
                    "simply_connected": adj.is_simply_connected(group)}
        districts.append({"district_id": d, "cells": list(group), "a_count": a, "b_count": b,
                          "a_deviation": a - report.total.target,
                          "b_deviation": b - report.subpop.target, **flags[d]})
    n_a, n_b = tree.population_sizes()
    audit = {
        "config": {"depth": tree.depth, "districts": cfg.districts, "strategy": plan.strategy,
                   "seed": cfg.seed, "eps_on": args.eps_on, "candidates": args.candidates,
                   "contiguous_search": bool(args.contiguous)},
        "population": {"total": n_a, "subpop": n_b},
        "group_sizes": list(plan.sizes),
        "districts": districts,
        "deviation": report.as_dict(),
        "leaf_deviation": leaf,
        "multi_piece_leaves": [c.id for c in tree.leaves if c.multi_piece],
        "notes": list(tree.audit),
    }
    out = cfg.out_dir
    stem = args.name
    plan_path = out / f"{stem}.geojson"
    plan_path.write_text(pio.dumps(pio.plan_geojson(plan, tree, flags)), encoding="utf-8")
    (out / f"{stem}_audit.json").write_text(pio.dumps(audit), encoding="utf-8")
    plot_plan(tree, plan, out / f"{stem}.svg", title=f"i={tree.depth}, n={cfg.districts}")

    if found_depth is not None:
        print(f"smallest contiguous depth: {found_depth}")
    print(f"depth={tree.depth} districts={cfg.districts} sizes={list(plan.sizes)}")
    for row in districts:
        print(f"district {row['district_id']}: A={row['a_count']} B={row['b_count']} "
              f"connected={'yes' if row['connected'] else 'no'}")
    print(f"max deviation A={report.total.max_abs:.4g} (bound {report.total.bound:.4g}) "
          f"B={report.subpop.max_abs:.4g} (bound {report.subpop.bound:.4g}) WITHIN BOUND")
    print(f"wrote {plan_path}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    region, points = _load_inputs(args)
    if args.districts > 2 ** args.depth:
        raise ValueError(f"districts n={args.districts} exceeds 2**depth = {2 ** args.depth}")
    try:
        outcomes = enumerate_outcomes(region, points, args.districts, args.depth)
    except SizeCapError as e:
        raise SizeCapError(f"{e}; use at most 16 points and depth <= 3") from None
    k = len(outcomes)
    print(f"{k} outcome{'' if k == 1 else 's'}")
    if args.dump:
        doc = {"count": k, "outcomes": [[list(d) for d in o] for o in sorted(outcomes)]}
        Path(args.dump).write_text(pio.dumps(doc), encoding="utf-8")
    return EXIT_OK


def _kinds(text: str) -> List[ProjectionKind]:
    if str(text).strip().lower() == "both":
        return [ProjectionKind.MERCATOR, ProjectionKind.GALL_PETERS]
    return [ProjectionKind.parse(text)]


def cmd_project(args) -> int:
    regions = pio.read_geo_regions(args.input)
    max_lat = math.radians(args.max_lat)
    out = _out_dir(args)
    stem = Path(args.input).stem

    true_km2 = {name: sum(spherical_polygon_area(r) for r in rings) * EARTH_RADIUS_KM ** 2
                for name, rings in regions}
    for kind in _kinds(args.kind):
        feats = []
        map_areas = {}
        for name, rings in regions:
            coords = []
            total = 0.0
            for k, ring in enumerate(rings):
                try:
                    total += region_map_area(kind, ring, max_lat=max_lat)
                except GeometryError as e:
                    raise GeometryError(f"{name} ring {k} {e}") from None
                xy = [project(kind, p, max_lat) for p in densify(ring)]
                coords.append([pio.ring_coords(SimplePolygon(xy, validate=False))])
            map_areas[name] = total
            feats.append({"type": "Feature",
                          "properties": {"name": name, "map_area": total,
                                         "sphere_area_km2": true_km2[name]},
                          "geometry": {"type": "MultiPolygon", "coordinates": coords}})
        tag = kind.value
        (out / f"{stem}_{tag}.geojson").write_text(
            pio.dumps({"type": "FeatureCollection", "features": feats}), encoding="utf-8")
        if regions:
            lons = [math.degrees(p.lon) for _, rings in regions for r in rings for p in r]
            lats = [math.degrees(p.lat) for _, rings in regions for r in rings for p in r]
            step = args.grid_step
            lat_rng = (math.floor(min(lats) / step) * step, math.ceil(max(lats) / step) * step)
            lon_rng = (math.floor(min(lons) / step) * step, math.ceil(max(lons) / step) * step)
            rows = distortion_grid(kind, lat_rng, lon_rng, step, max_lat)
        else:
            rows = []
        pio.write_distortion_csv(rows, out / f"{stem}_{tag}_distortion.csv")
        plot_projection(kind, regions, out / f"{stem}_{tag}.svg", title=tag)

        for name, _ in regions:
            print(f"{tag} {name}: map area {map_areas[name]:.6g}, "
                  f"sphere area {true_km2[name] / 1e6:.2f} million km^2")
        if len(regions) >= 2:
            (n1, _), (n2, _) = regions[0], regions[1]
            print(f"{tag} area ratio {n1}/{n2} = {map_areas[n1] / map_areas[n2]:.3f} "
                  f"(true {true_km2[n1] / true_km2[n2]:.3f})")
    return EXIT_OK


def cmd_triangle(args) -> int:
    pts = [GeoPoint.from_degrees(*getattr(args, v)) for v in "abc"]
    s = spherical_triangle_angle_sum(*pts)
    print(f"angle sum {math.degrees(s):.9f} deg (excess {math.degrees(s - math.pi):.9f} deg)")
    return EXIT_OK


COMMANDS = {
    "zone": (cmd_zone, ("center", "radius", "point")),
    "cut": (cmd_cut, ("points",)),
    "district": (cmd_district, ("depth", "districts")),
    "enumerate": (cmd_enumerate, ("depth", "districts")),
    "project": (cmd_project, ("input",)),
    "triangle": (cmd_triangle, ("a", "b", "c")),
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, subs, argv)
    except SystemExit as e:
        return int(e.code or 0)
    except pio.InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    func, required = COMMANDS[args.command]
    try:
        _require(subs[args.command], args, *required)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return func(args)
    except SizeCapError as e:
        print(f"size cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (CutSearchError, PlanError, InvariantError) as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (pio.InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
