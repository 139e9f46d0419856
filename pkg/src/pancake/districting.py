"""Recursive pancake bisection into 2**i cells and grouping into n districts.

Each cell is cut by a balanced line found on the cell's own points, so after
``i`` rounds every leaf holds ``|P| / 2**i`` of each population up to less
than one person.  Leaves are then grouped into ``n`` districts of
``floor(2**i / n)`` or ``ceil(2**i / n)`` leaves each.

Cell ids use heap numbering: the root is 0 and the children of ``k`` are
``2k + 1`` (positive side of the cut) and ``2k + 2`` (negative side).
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from .geometry import (
    GeometryError,
    Line2,
    Point2,
    SimplePolygon,
    contains_point,
    polygon_area,
    split_polygon,
)
from .hamsandwich import (
    CutSearchError,
    OrientedCut,
    PopulationPoint,
    SizeCapError,
    balanced_cuts,
    cut_sides,
    cut_tolerance,
    oracle_find_all_cuts,
    verify_cut,
)

log = logging.getLogger(__name__)

DEFAULT_CANDIDATES = 8
GROUPING_CAP = 10 ** 6
ENUM_POINT_CAP = 16
ENUM_LEAF_CAP = 8


class Strategy(enum.Enum):
    INDEX_ORDER = "index"
    CONTIGUITY_GREEDY = "greedy"
    EXHAUSTIVE_BEST = "exhaustive"

    @classmethod
    def parse(cls, text) -> "Strategy":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("-", "_")
        aliases = {
            "index": cls.INDEX_ORDER, "index_order": cls.INDEX_ORDER, "indexorder": cls.INDEX_ORDER,
            "greedy": cls.CONTIGUITY_GREEDY, "contiguity_greedy": cls.CONTIGUITY_GREEDY,
            "contiguitygreedy": cls.CONTIGUITY_GREEDY,
            "exhaustive": cls.EXHAUSTIVE_BEST, "exhaustive_best": cls.EXHAUSTIVE_BEST,
            "exhaustivebest": cls.EXHAUSTIVE_BEST,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown grouping strategy {text!r}") from None


@dataclass(frozen=True)
class Cell:
    id: int
    pieces: Tuple[SimplePolygon, ...]
    point_indices: Tuple[int, ...]
    depth: int
    parent: Optional[int]

    @property
    def area(self) -> float:
        return sum(polygon_area(p) for p in self.pieces)

    @property
    def multi_piece(self) -> bool:
        return len(self.pieces) > 1


@dataclass
class BisectionTree:
    region: SimplePolygon
    points: Tuple[PopulationPoint, ...]
    depth: int
    cells: Dict[int, Cell]
    cuts: Dict[int, OrientedCut]
    audit: List[str] = field(default_factory=list)

    @property
    def leaves(self) -> List[Cell]:
        first = 2 ** self.depth - 1
        return [self.cells[k] for k in range(first, 2 * first + 1)]

    @property
    def leaf_ids(self) -> List[int]:
        first = 2 ** self.depth - 1
        return list(range(first, 2 * first + 1))

    def population_sizes(self) -> Tuple[int, int]:
        return len(self.points), sum(1 for p in self.points if p.in_subpop)

    def truncate(self, depth: int) -> "BisectionTree":
        """The same tree cut off after ``depth`` rounds of bisection."""
        if not 0 <= depth <= self.depth:
            raise ValueError(f"depth must lie in [0, {self.depth}]")
        last = 2 ** (depth + 1) - 1
        return BisectionTree(
            region=self.region,
            points=self.points,
            depth=depth,
            cells={k: c for k, c in self.cells.items() if k < last},
            cuts={k: c for k, c in self.cuts.items() if k < 2 ** depth - 1},
            audit=list(self.audit),
        )


def children(k: int) -> Tuple[int, int]:
    return 2 * k + 1, 2 * k + 2


def _bbox_aspect(pieces: Sequence[SimplePolygon]) -> float:
    if not pieces:
        return math.inf
    boxes = [p.bbox() for p in pieces]
    w = max(b[2] for b in boxes) - min(b[0] for b in boxes)
    h = max(b[3] for b in boxes) - min(b[1] for b in boxes)
    lo, hi = min(w, h), max(w, h)
    return math.inf if lo <= 0 else hi / lo


def _split_pieces(pieces, line, audit):
    pos, neg = [], []
    for poly in pieces:
        p, q = split_polygon(poly, line, audit)
        pos.extend(p)
        neg.extend(q)
    return pos, neg


def _geometric_cut(pieces: Sequence[SimplePolygon]) -> Line2:
    """Cut for a cell without points: halve the bounding box's long side."""
    if not pieces:
        return Line2.from_coeffs(1.0, 0.0, 0.0)
    boxes = [p.bbox() for p in pieces]
    x0, y0 = min(b[0] for b in boxes), min(b[1] for b in boxes)
    x1, y1 = max(b[2] for b in boxes), max(b[3] for b in boxes)
    if x1 - x0 >= y1 - y0:
        return Line2.from_coeffs(1.0, 0.0, 0.5 * (x0 + x1))
    return Line2.from_coeffs(0.0, 1.0, 0.5 * (y0 + y1))


def choose_cut(
    pieces: Sequence[SimplePolygon],
    points: Sequence[PopulationPoint],
    ids: Sequence[int],
    candidates: int = DEFAULT_CANDIDATES,
    eps_on: float = 0.0,
) -> OrientedCut:
    """Pick among the first ``candidates`` balanced cuts of a cell.

    The winner minimises the larger bounding-box aspect ratio of the two
    child regions; ties go to the smallest ``(a, b, c)`` line.
    """
    best = None
    for cut in itertools.islice(balanced_cuts(points, ids, eps_on), candidates):
        pos, neg = _split_pieces(pieces, cut.line, None)
        score = (max(_bbox_aspect(pos), _bbox_aspect(neg)),
                 (cut.line.a, cut.line.b, cut.line.c))
        if best is None or score < best[0]:
            best = (score, cut)
    if best is None:
        raise CutSearchError(f"no balanced cut for a cell with {len(points)} points")
    return best[1]


def recursive_bisect(
    region: SimplePolygon,
    points: Sequence[PopulationPoint],
    depth: int,
    candidates: int = DEFAULT_CANDIDATES,
    eps_on: float = 0.0,
) -> BisectionTree:
    """Cut ``region`` into ``2**depth`` cells, each balanced for both populations."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    points = tuple(points)
    tol = 1e-9 * region.diameter()
    for k, p in enumerate(points):
        if not contains_point(region, p.location, tol):
            raise GeometryError(f"point {k} at ({p.location.x}, {p.location.y}) lies outside the region")
    if points and 2 ** depth > len(points):
        warnings.warn(f"{2 ** depth} cells for only {len(points)} points; some cells will be empty")

    audit: List[str] = []
    cells = {0: Cell(0, (region,), tuple(range(len(points))), 0, None)}
    cuts: Dict[int, OrientedCut] = {}
    for node in range(2 ** depth - 1):
        cell = cells[node]
        idx = list(cell.point_indices)
        if idx:
            local = [points[k] for k in idx]
            cut = choose_cut(cell.pieces, local, idx, candidates, eps_on)
            report = verify_cut(local, cut)
            if not report.balanced:
                raise CutSearchError(f"unbalanced cut at cell {node}: {report}")
            sides = cut_sides(local, cut)
            pos_idx = tuple(k for k, s in zip(idx, sides) if s > 0)
            neg_idx = tuple(k for k, s in zip(idx, sides) if s < 0)
            global_cut = cut.remap(idx)
        else:
            global_cut = OrientedCut(_geometric_cut(cell.pieces), (), cut_tolerance(points))
            pos_idx = neg_idx = ()
        pos, neg = _split_pieces(cell.pieces, global_cut.line, audit)
        left, right = children(node)
        cells[left] = Cell(left, tuple(pos), pos_idx, cell.depth + 1, node)
        cells[right] = Cell(right, tuple(neg), neg_idx, cell.depth + 1, node)
        cuts[node] = global_cut
    return BisectionTree(region, points, depth, cells, cuts, audit)


# -- dyadic bookkeeping ------------------------------------------------------


def dyadic_approx(x: float, i: int) -> Fraction:
    """``floor(2**i * x) / 2**i``, within ``2**-i`` below ``x``."""
    if i < 0:
        raise ValueError("i must be non-negative")
    q = Fraction(x)
    return Fraction(math.floor(q * 2 ** i), 2 ** i)


def group_sizes(leaves: int, n: int) -> List[int]:
    """Sizes for ``n`` groups of ``leaves`` cells, larger groups first."""
    if not 1 <= n <= leaves:
        raise ValueError(f"need 1 <= n <= {leaves}, got n={n}")
    q, r = divmod(leaves, n)
    return [q + 1] * r + [q] * (n - r)


def count_groupings(leaves: int, n: int) -> int:
    """Number of ways to split labelled leaves into unlabelled groups of the valid sizes."""
    sizes = group_sizes(leaves, n)
    total = math.factorial(leaves)
    for s in sizes:
        total //= math.factorial(s)
    for mult in Counter(sizes).values():
        total //= math.factorial(mult)
    return total


def iter_groupings(items: Sequence[int], sizes: Sequence[int],
                   accept: Optional[Callable[[Tuple[int, ...]], bool]] = None):
    """All splits of ``items`` into groups with the multiset of ``sizes``.

    Each grouping appears once.  ``accept`` prunes partial groupings: a
    group is kept only if ``accept(group)`` holds.
    """
    items = tuple(items)
    remaining = Counter(sizes)

    def rec(rest: Tuple[int, ...]):
        if not rest:
            yield ()
            return
        head, tail = rest[0], rest[1:]
        for s in sorted(remaining, reverse=True):
            if remaining[s] == 0:
                continue
            remaining[s] -= 1
            for mates in itertools.combinations(tail, s - 1):
                group = (head,) + mates
                if accept is not None and not accept(group):
                    continue
                left = tuple(x for x in tail if x not in mates)
                for more in rec(left):
                    yield (group,) + more
            remaining[s] += 1

    yield from rec(items)


# -- plans and audits -------------------------------------------------------


@dataclass(frozen=True)
class PopulationDeviation:
    total: int
    target: float
    max_abs: float
    max_rel: float
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.max_abs <= self.bound


@dataclass(frozen=True)
class DistrictPlan:
    depth: int
    n: int
    groups: Tuple[Tuple[int, ...], ...]
    members: Tuple[Tuple[int, ...], ...]
    counts: Tuple[Tuple[int, int], ...]
    strategy: str = Strategy.INDEX_ORDER.value

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    def deviation(self) -> Dict[str, float]:
        """Max relative deviation from the mean, per population."""
        out = {}
        for col, name in enumerate(("total", "subpop")):
            total = sum(c[col] for c in self.counts)
            if total == 0:
                out[name] = 0.0
                continue
            target = total / self.n
            out[name] = max(abs(c[col] - target) for c in self.counts) / target
        return out

    def max_deviation(self) -> float:
        return max(self.deviation().values())


@dataclass(frozen=True)
class DeviationReport:
    total: PopulationDeviation
    subpop: PopulationDeviation

    @property
    def within_bound(self) -> bool:
        return self.total.within_bound and self.subpop.within_bound

    def as_dict(self) -> dict:
        def one(d: PopulationDeviation):
            return {"size": d.total, "target": d.target, "max_abs": d.max_abs,
                    "max_rel": d.max_rel, "bound": d.bound, "within_bound": d.within_bound}
        return {"total": one(self.total), "subpop": one(self.subpop),
                "within_bound": self.within_bound}


class PlanError(ValueError):
    """Plan inconsistent with the population or tree."""


def analytic_bound(size: int, depth: int, n: int) -> float:
    """Largest possible deviation, in persons, of a district from ``size / n``.

    A district of ``c`` leaves differs from ``c * size / 2**depth`` by less
    than ``c`` (each leaf is off by under one person), and that in turn
    differs from ``size / n`` by ``size * |c / 2**depth - 1 / n|``, which is
    at most ``size / 2**depth``.
    """
    leaves = 2 ** depth
    return max(size * abs(c / leaves - 1 / n) + c for c in set(group_sizes(leaves, n)))


def _plan_from_groups(tree: BisectionTree, groups, n: int, strategy: Strategy) -> DistrictPlan:
    members = []
    counts = []
    for g in groups:
        idx = sorted(k for cid in g for k in tree.cells[cid].point_indices)
        members.append(tuple(idx))
        counts.append((len(idx), sum(1 for k in idx if tree.points[k].in_subpop)))
    return DistrictPlan(tree.depth, n, tuple(tuple(g) for g in groups),
                        tuple(members), tuple(counts), strategy.value)


def audit_plan(plan: DistrictPlan, points: Sequence[PopulationPoint]) -> DeviationReport:
    seen = sorted(k for m in plan.members for k in m)
    if seen != list(range(len(points))):
        raise PlanError("district memberships do not partition the population")
    if len(plan.groups) != plan.n or len(plan.members) != plan.n:
        raise PlanError(f"plan has {len(plan.groups)} groups, expected {plan.n}")
    leaves = 2 ** plan.depth
    valid = set(group_sizes(leaves, plan.n))
    if any(len(g) not in valid for g in plan.groups) or sum(plan.sizes) != leaves:
        raise PlanError(f"group sizes {plan.sizes} invalid for {leaves} leaves")

    reports = []
    for col, mask in ((0, lambda p: True), (1, lambda p: p.in_subpop)):
        counts = [sum(1 for k in m if mask(points[k])) for m in plan.members]
        if any(c != pc[col] for c, pc in zip(counts, plan.counts)):
            raise PlanError("stored district counts disagree with memberships")
        size = sum(counts)
        target = size / plan.n
        max_abs = max(abs(c - target) for c in counts)
        max_rel = max_abs / target if target > 0 else 0.0
        reports.append(PopulationDeviation(size, target, max_abs, max_rel,
                                           analytic_bound(size, plan.depth, plan.n)))
    return DeviationReport(*reports)


# -- adjacency ---------------------------------------------------------------


def _edge_overlap(a0: Point2, a1: Point2, b0: Point2, b1: Point2, tol: float) -> float:
    """Length shared by two collinear segments (0 if not collinear)."""
    dx, dy = a1.x - a0.x, a1.y - a0.y
    L = math.hypot(dx, dy)
    if L <= tol:
        return 0.0
    ux, uy = dx / L, dy / L
    for p in (b0, b1):
        if abs((p.x - a0.x) * uy - (p.y - a0.y) * ux) > tol:
            return 0.0
    t0 = (b0.x - a0.x) * ux + (b0.y - a0.y) * uy
    t1 = (b1.x - a0.x) * ux + (b1.y - a0.y) * uy
    lo, hi = max(0.0, min(t0, t1)), min(L, max(t0, t1))
    return max(0.0, hi - lo)


def shared_boundary(p: SimplePolygon, q: SimplePolygon, tol: float) -> float:
    px0, py0, px1, py1 = p.bbox()
    qx0, qy0, qx1, qy1 = q.bbox()
    if px0 > qx1 + tol or qx0 > px1 + tol or py0 > qy1 + tol or qy0 > py1 + tol:
        return 0.0
    total = 0.0
    for a0, a1 in p.edges():
        for b0, b1 in q.edges():
            total += _edge_overlap(a0, a1, b0, b1, tol)
    return total


@dataclass
class CellAdjacencyGraph:
    """Leaf adjacency (``graph``) and the finer piece adjacency (``pieces``).

    Cells or pieces are adjacent only when they share boundary of positive
    length; touching at a corner does not count.  Leaf nodes carry a
    ``multi_piece`` flag marking cells whose geometry is disconnected.
    """

    graph: nx.Graph
    pieces: nx.Graph
    tol: float

    @property
    def nodes(self) -> List[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> Set[Tuple[int, int]]:
        return {tuple(sorted(e)) for e in self.graph.edges}

    def district_pieces(self, group: Iterable[int]) -> List[Tuple[int, int]]:
        g = set(group)
        return [v for v in self.pieces.nodes if v[0] in g]

    def is_connected(self, group: Iterable[int]) -> bool:
        nodes = self.district_pieces(group)
        if not nodes:
            return True
        return nx.is_connected(self.pieces.subgraph(nodes))

    def is_simply_connected(self, group: Iterable[int]) -> bool:
        """Connected, and every complementary component reaches the outer boundary."""
        if not self.is_connected(group):
            return False
        g = set(group)
        rest = [v for v in self.pieces.nodes if v[0] not in g]
        for comp in nx.connected_components(self.pieces.subgraph(rest)):
            if not any(self.pieces.nodes[v]["on_boundary"] for v in comp):
                return False
        return True


def build_adjacency(tree: BisectionTree, rtol: float = 1e-9) -> CellAdjacencyGraph:
    tol = rtol * tree.region.diameter()
    graph = nx.Graph()
    pieces = nx.Graph()
    region = tree.region
    items = []
    for cell in tree.leaves:
        graph.add_node(cell.id, multi_piece=cell.multi_piece, empty=not cell.pieces)
        for k, poly in enumerate(cell.pieces):
            key = (cell.id, k)
            on_boundary = shared_boundary(poly, region, tol) > tol
            pieces.add_node(key, on_boundary=on_boundary)
            items.append((key, poly))
    for (ka, pa), (kb, pb) in itertools.combinations(items, 2):
        if shared_boundary(pa, pb, tol) > tol:
            pieces.add_edge(ka, kb)
            if ka[0] != kb[0]:
                graph.add_edge(ka[0], kb[0])
    return CellAdjacencyGraph(graph, pieces, tol)


# -- grouping strategies ----------------------------------------------------


def _index_groups(leaf_ids: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    out, pos = [], 0
    for s in group_sizes(len(leaf_ids), n):
        out.append(tuple(leaf_ids[pos:pos + s]))
        pos += s
    return out


def _greedy_groups(leaf_ids: Sequence[int], n: int, adj: CellAdjacencyGraph) -> List[Tuple[int, ...]]:
    free = set(leaf_ids)
    out = []
    for s in group_sizes(len(leaf_ids), n):
        seed = min(free)
        group = [seed]
        free.discard(seed)
        while len(group) < s:
            frontier = sorted({v for u in group for v in adj.graph.neighbors(u)} & free)
            nxt = frontier[0] if frontier else min(free)
            group.append(nxt)
            free.discard(nxt)
        out.append(tuple(sorted(group)))
    return out


def _objective(tree: BisectionTree, groups, n, adj: CellAdjacencyGraph, simply: bool = False):
    plan = _plan_from_groups(tree, groups, n, Strategy.EXHAUSTIVE_BEST)
    check = adj.is_simply_connected if simply else adj.is_connected
    broken = sum(1 for g in groups if not check(g))
    return (broken, plan.max_deviation(), tuple(groups)), plan


def group_cells(
    tree: BisectionTree,
    n: int,
    strategy: Strategy | str = Strategy.INDEX_ORDER,
    adjacency: Optional[CellAdjacencyGraph] = None,
    cap: int = GROUPING_CAP,
) -> DistrictPlan:
    """Group the ``2**depth`` leaves into ``n`` districts."""
    strategy = Strategy.parse(strategy)
    leaves = tree.leaf_ids
    if not 1 <= n <= len(leaves):
        raise ValueError(f"need 1 <= n <= 2**depth = {len(leaves)}, got n={n}")
    if strategy is Strategy.INDEX_ORDER:
        return _plan_from_groups(tree, _index_groups(leaves, n), n, strategy)
    adj = adjacency or build_adjacency(tree)
    if strategy is Strategy.CONTIGUITY_GREEDY:
        return _plan_from_groups(tree, _greedy_groups(leaves, n, adj), n, strategy)
    total = count_groupings(len(leaves), n)
    if total > cap:
        raise SizeCapError(f"{total} groupings exceed the exhaustive cap of {cap}")
    best = None
    for groups in iter_groupings(leaves, group_sizes(len(leaves), n)):
        score, plan = _objective(tree, groups, n, adj)
        if best is None or score < best[0]:
            best = (score, plan)
    return DistrictPlan(best[1].depth, n, best[1].groups, best[1].members,
                        best[1].counts, strategy.value)


def _local_search(tree, groups, n, adj, simply, max_rounds=50):
    """Swap leaves between districts while the objective improves."""
    groups = [tuple(g) for g in groups]
    best, _ = _objective(tree, groups, n, adj, simply)
    for _ in range(max_rounds):
        improved = False
        for gi, gj in itertools.combinations(range(len(groups)), 2):
            for a in groups[gi]:
                for b in groups[gj]:
                    trial = list(groups)
                    trial[gi] = tuple(sorted(set(groups[gi]) - {a} | {b}))
                    trial[gj] = tuple(sorted(set(groups[gj]) - {b} | {a}))
                    score, _ = _objective(tree, trial, n, adj, simply)
                    if score[:2] < best[:2]:
                        groups, best, improved = trial, score, True
                        break
                if improved:
                    break
            if improved:
                break
        if not improved:
            break
    return groups


def contiguous_min_depth(
    region: SimplePolygon,
    points: Sequence[PopulationPoint],
    n: int,
    deviation_cap: float,
    i_max: int = 8,
    simply_connected: bool = False,
    candidates: int = DEFAULT_CANDIDATES,
    eps_on: float = 0.0,
) -> Optional[Tuple[int, DistrictPlan]]:
    """Smallest depth whose leaves can be grouped into ``n`` connected districts.

    ``deviation_cap`` bounds the relative deviation of both populations.
    Groupings are searched exhaustively (pruned to connected groups) when
    there are at most ``GROUPING_CAP`` of them, otherwise greedily with
    local improvement.  ``None`` means nothing was found up to ``i_max``;
    it is not a proof that no such districting exists.
    """
    i_min = max(0, math.ceil(math.log2(n)))
    if i_min > i_max:
        return None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        full = recursive_bisect(region, points, i_max, candidates, eps_on)
    for i in range(i_min, i_max + 1):
        tree = full.truncate(i)
        adj = build_adjacency(tree)
        check = adj.is_simply_connected if simply_connected else adj.is_connected
        leaves = tree.leaf_ids
        if n == len(leaves) and any(c.multi_piece for c in tree.leaves):
            continue
        sizes = group_sizes(len(leaves), n)
        best = None
        if count_groupings(len(leaves), n) <= GROUPING_CAP:
            for groups in iter_groupings(leaves, sizes, accept=check):
                plan = _plan_from_groups(tree, groups, n, Strategy.EXHAUSTIVE_BEST)
                dev = plan.max_deviation()
                if dev <= deviation_cap and (best is None or dev < best[0]):
                    best = (dev, plan)
        else:
            groups = _local_search(tree, _greedy_groups(leaves, n, adj), n, adj, simply_connected)
            if all(check(g) for g in groups):
                plan = _plan_from_groups(tree, groups, n, Strategy.CONTIGUITY_GREEDY)
                if plan.max_deviation() <= deviation_cap:
                    best = (plan.max_deviation(), plan)
        if best is not None:
            return i, best[1]
    return None


# -- outcome enumeration ----------------------------------------------------


def _leaf_partitions(points, idx: Tuple[int, ...], depth: int, memo) -> Set[Tuple[Tuple[int, ...], ...]]:
    """All multisets of leaf point sets reachable from cell ``idx``."""
    key = (idx, depth)
    if key in memo:
        return memo[key]
    if depth == 0:
        result = {(idx,)}
    else:
        if len(idx) == 0:
            splits = [((), ())]
        else:
            local = [points[k] for k in idx]
            splits = []
            for cut in oracle_find_all_cuts(local, ids=idx, cap=ENUM_POINT_CAP):
                sides = cut_sides(local, cut)
                pos = tuple(k for k, s in zip(idx, sides) if s > 0)
                neg = tuple(k for k, s in zip(idx, sides) if s < 0)
                splits.append((pos, neg))
        result = set()
        for pos, neg in splits:
            for a in _leaf_partitions(points, pos, depth - 1, memo):
                for b in _leaf_partitions(points, neg, depth - 1, memo):
                    result.add(tuple(sorted(a + b)))
    memo[key] = result
    return result


def enumerate_outcomes(
    region: SimplePolygon,
    points: Sequence[PopulationPoint],
    n: int,
    depth: int,
) -> Set[Tuple[Tuple[int, ...], ...]]:
    """Distinct partitions of the population into ``n`` districts.

    Every balanced cut at every node (up to equal bipartitions) is crossed
    with every valid grouping of the resulting leaves.  Each outcome is a
    sorted tuple of sorted point-index tuples, one per district.
    """
    if len(points) > ENUM_POINT_CAP:
        raise SizeCapError(f"enumeration is limited to {ENUM_POINT_CAP} points, got {len(points)}")
    if 2 ** depth > ENUM_LEAF_CAP:
        raise SizeCapError(f"enumeration is limited to {ENUM_LEAF_CAP} leaves, got {2 ** depth}")
    leaves = 2 ** depth
    sizes = group_sizes(leaves, n)
    tol = 1e-9 * region.diameter()
    for k, p in enumerate(points):
        if not contains_point(region, p.location, tol):
            raise GeometryError(f"point {k} lies outside the region")
    outcomes = set()
    for leaf_sets in _leaf_partitions(tuple(points), tuple(range(len(points))), depth, {}):
        for groups in iter_groupings(range(leaves), sizes):
            districts = tuple(sorted(tuple(sorted(k for g in grp for k in leaf_sets[g]))
                                     for grp in groups))
            outcomes.add(districts)
    return outcomes


def count_outcomes(region: SimplePolygon, points: Sequence[PopulationPoint], n: int, depth: int) -> int:
    return len(enumerate_outcomes(region, points, n, depth))
