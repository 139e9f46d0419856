"""Discrete pancake cuts: one line that halves two nested point populations.

Populations are counted, not smoothed.  A cut is balanced when each side
holds the same number of points of each population up to one.  Points that
sit exactly on the cutting line are assigned to a side explicitly; the
assignment follows a symbolic perturbation in which point ``k`` is moved by
``delta * (cos(k*PERTURB_ANGLE), sin(k*PERTURB_ANGLE))`` for an
infinitesimal ``delta``, so coincident and collinear inputs are handled
reproducibly without touching the coordinates.

Every combinatorially distinct cut of a finite point set is realised by a
line through two (perturbed) input points with one of four sides chosen for
those two points, so the solver and the brute-force oracle both scan that
candidate family.  The solver filters candidates with an angular sweep
around each pivot and re-checks survivors exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .geometry import GeometryError, Line2, Point2, Side, as_point, side_of

PERTURB_ANGLE = math.pi * (3.0 - math.sqrt(5.0))  # golden angle
ORACLE_CAP = 16

# (side of first pair point, side of second pair point): two offsets of the
# line followed by the two infinitesimal rotations about the pair midpoint.
POLARITIES = (
    (Side.POSITIVE, Side.POSITIVE),
    (Side.NEGATIVE, Side.NEGATIVE),
    (Side.POSITIVE, Side.NEGATIVE),
    (Side.NEGATIVE, Side.POSITIVE),
)


class CutError(GeometryError):
    """Malformed cut, e.g. an on-line point without a side."""


class CutSearchError(RuntimeError):
    """No balanced cut was found.  The theorem guarantees one, so this is a bug."""


class SizeCapError(ValueError):
    """Input too large for a brute-force routine."""


@dataclass(frozen=True)
class PopulationPoint:
    location: Point2
    in_subpop: bool = False
    in_total: bool = True

    def __post_init__(self):
        if not isinstance(self.location, Point2):
            object.__setattr__(self, "location", as_point(self.location))
        if not self.in_total:
            raise GeometryError("every point belongs to the total population")


@dataclass(frozen=True)
class OrientedCut:
    """A line plus the side of every input point lying on it.

    ``eps_on`` is the tolerance under which a point counts as lying on the
    line; it is part of the cut so that verification agrees with the solver.
    """

    line: Line2
    on_line: Tuple[Tuple[int, Side], ...] = ()
    eps_on: float = 0.0

    @property
    def assignment(self) -> Dict[int, Side]:
        return dict(self.on_line)

    def remap(self, ids: Sequence[int]) -> "OrientedCut":
        """Rename point indices through ``ids`` (local index -> new index)."""
        on = tuple(sorted((ids[k], s) for k, s in self.on_line))
        return OrientedCut(self.line, on, self.eps_on)


@dataclass(frozen=True)
class CutBalanceReport:
    pos_total: int
    neg_total: int
    pos_subpop: int
    neg_subpop: int

    @property
    def balanced(self) -> bool:
        return (abs(self.pos_total - self.neg_total) <= 1
                and abs(self.pos_subpop - self.neg_subpop) <= 1)

    def as_tuple(self):
        return (self.pos_total, self.neg_total, self.pos_subpop, self.neg_subpop, self.balanced)


def make_points(coords, subpop=None) -> List[PopulationPoint]:
    """Convenience constructor from an ``(n, 2)`` array and a boolean mask."""
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    if subpop is None:
        subpop = np.zeros(len(coords), dtype=bool)
    return [PopulationPoint(Point2(float(x), float(y)), bool(s))
            for (x, y), s in zip(coords, subpop)]


def cut_tolerance(points: Sequence[PopulationPoint]) -> float:
    """On-line tolerance covering rounding in lines built through two points."""
    scale = 1.0
    for p in points:
        scale = max(scale, abs(p.location.x), abs(p.location.y))
    return 64 * 2.0 ** -52 * scale


def perturbation(k: int) -> Tuple[float, float]:
    return math.cos(k * PERTURB_ANGLE), math.sin(k * PERTURB_ANGLE)


def _cross(ux, uy, vx, vy):
    return ux * vy - uy * vx


def _pair_direction(pi: Point2, pj: Point2, ki: int, kj: int) -> Tuple[float, float]:
    dx, dy = pj.x - pi.x, pj.y - pi.y
    if dx == 0.0 and dy == 0.0:
        ei, ej = perturbation(ki), perturbation(kj)
        dx, dy = ej[0] - ei[0], ej[1] - ei[1]
    return dx, dy


def symbolic_side(
    line: Line2,
    pi: Point2, pj: Point2, pk: Point2,
    ki: int, kj: int, kk: int,
) -> Side:
    """Side of on-line point ``k`` w.r.t. the perturbed line through ``i, j``.

    The orientation determinant of the perturbed triple is a polynomial in
    delta; its first non-zero coefficient decides.  The result is expressed
    in terms of ``line``'s positive side.
    """
    ei, ej, ek = perturbation(ki), perturbation(kj), perturbation(kk)
    dij = (pj.x - pi.x, pj.y - pi.y)
    dik = (pk.x - pi.x, pk.y - pi.y)
    eij = (ej[0] - ei[0], ej[1] - ei[1])
    eik = (ek[0] - ei[0], ek[1] - ei[1])
    coeffs = (
        _cross(*dij, *dik),
        _cross(*dij, *eik) + _cross(*eij, *dik),
        _cross(*eij, *eik),
    )
    orient = next((c for c in coeffs if c != 0.0), 0.0)
    if orient == 0.0:
        # fully degenerate even under perturbation: fall back on index order
        orient = 1.0 if kk > kj else -1.0
    dx, dy = _pair_direction(pi, pj, ki, kj)
    # left normal of the pair direction, expressed in the line's orientation
    same = line.a * -dy + line.b * dx > 0
    positive_left = 1.0 if same else -1.0
    return Side.POSITIVE if orient * positive_left > 0 else Side.NEGATIVE


# -- verification -----------------------------------------------------------


def _coords(points: Sequence[PopulationPoint]):
    X = np.fromiter((p.location.x for p in points), dtype=float, count=len(points))
    Y = np.fromiter((p.location.y for p in points), dtype=float, count=len(points))
    B = np.fromiter((p.in_subpop for p in points), dtype=bool, count=len(points))
    return X, Y, B


def _line_values(line: Line2, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    # same operation order as geometry.side_of, hence bit-identical values
    return line.a * X + line.b * Y - line.c


def cut_sides(points: Sequence[PopulationPoint], cut: OrientedCut) -> np.ndarray:
    """Side (+1 / -1) of every point under ``cut``."""
    X, Y, _ = _coords(points)
    V = _line_values(cut.line, X, Y)
    sides = np.where(V > cut.eps_on, 1, np.where(V < -cut.eps_on, -1, 0))
    assignment = cut.assignment
    on_idx = np.flatnonzero(sides == 0)
    missing = [int(k) for k in on_idx if int(k) not in assignment]
    if missing:
        raise CutError(f"on-line points without a side: {missing}")
    for k, s in assignment.items():
        if not (0 <= k < len(points)) or sides[k] != 0:
            raise CutError(f"point {k} is not on the cut line but has an assignment")
        if s is Side.ON:
            raise CutError(f"point {k} assigned to no side")
        sides[k] = int(s)
    return sides


def verify_cut(points: Sequence[PopulationPoint], cut: OrientedCut) -> CutBalanceReport:
    sides = cut_sides(points, cut)
    _, _, B = _coords(points)
    pos = sides > 0
    return CutBalanceReport(
        pos_total=int(pos.sum()),
        neg_total=int((~pos).sum()),
        pos_subpop=int((pos & B).sum()),
        neg_subpop=int((~pos & B).sum()),
    )


Bipartition = FrozenSet[FrozenSet[int]]


def bipartition(points: Sequence[PopulationPoint], cut: OrientedCut) -> Bipartition:
    sides = cut_sides(points, cut)
    pos = frozenset(int(k) for k in np.flatnonzero(sides > 0))
    neg = frozenset(int(k) for k in np.flatnonzero(sides < 0))
    return frozenset((pos, neg))


# -- candidate evaluation ---------------------------------------------------


class _Instance:
    """Cached arrays for one point set."""

    def __init__(self, points: Sequence[PopulationPoint], ids: Optional[Sequence[int]],
                 eps_on: float = 0.0):
        self.points = list(points)
        self.n = len(self.points)
        self.ids = list(range(self.n)) if ids is None else [int(k) for k in ids]
        if len(self.ids) != self.n:
            raise ValueError("ids must match points")
        self.X, self.Y, self.B = _coords(self.points)
        self.nA = self.n
        self.nB = int(self.B.sum())
        self.eps = max(cut_tolerance(self.points), eps_on)

    def pair_cuts(self, i: int, j: int) -> List[OrientedCut]:
        """Balanced cuts among the four polarities of the pair ``(i, j)``."""
        pts, ids = self.points, self.ids
        pi, pj = pts[i].location, pts[j].location
        line = Line2.through(pi, _pair_direction(pi, pj, ids[i], ids[j]))
        V = _line_values(line, self.X, self.Y)
        eps = self.eps
        on = np.abs(V) <= eps
        if not (on[i] and on[j]):
            return []
        pos = V > eps
        extra: Dict[int, Side] = {}
        for k in np.flatnonzero(on):
            k = int(k)
            if k != i and k != j:
                extra[k] = symbolic_side(line, pi, pj, pts[k].location, ids[i], ids[j], ids[k])
        pos_a = int(pos.sum()) + sum(1 for s in extra.values() if s is Side.POSITIVE)
        pos_b = int((pos & self.B).sum()) + sum(
            1 for k, s in extra.items() if s is Side.POSITIVE and self.B[k])
        found = []
        for si, sj in POLARITIES:
            pa = pos_a + (si > 0) + (sj > 0)
            pb = pos_b + (si > 0 and self.B[i]) + (sj > 0 and self.B[j])
            if abs(2 * pa - self.nA) <= 1 and abs(2 * pb - self.nB) <= 1:
                on_line = dict(extra)
                on_line[i] = si
                on_line[j] = sj
                found.append(OrientedCut(line, tuple(sorted(on_line.items())), eps))
        return found

    def sweep_pairs(self, i: int) -> np.ndarray:
        """Partners ``j > i`` whose line through ``p_i`` is nearly balanced.

        Uses angles around the pivot, which can misjudge nearly collinear
        points, hence the slack; survivors are re-checked exactly.
        """
        n = self.n
        if i >= n - 1:
            return np.empty(0, dtype=int)
        wx = self.X - self.X[i]
        wy = self.Y - self.Y[i]
        others = np.ones(n, dtype=bool)
        others[i] = False
        if np.any((wx == 0) & (wy == 0) & others):
            # coincident points around this pivot: no angular order, test all
            return np.arange(i + 1, n)
        ang = np.arctan2(wy, wx)
        idx = np.flatnonzero(others)
        order = idx[np.argsort(ang[idx], kind="stable")]
        a_sorted = ang[order]
        b_sorted = self.B[order].astype(np.int64)
        a2 = np.concatenate([a_sorted, a_sorted + 2 * np.pi])
        cb = np.concatenate([[0], np.cumsum(np.concatenate([b_sorted, b_sorted]))])

        J = np.arange(i + 1, n)
        aj = ang[J]
        lo = np.searchsorted(a2, aj, side="right")
        hi = np.searchsorted(a2, aj + np.pi, side="left")
        left_a = hi - lo
        left_b = cb[hi] - cb[lo]
        m = n - 1  # points other than the pivot
        right_a = m - 1 - left_a  # minus the partner itself
        right_b = self.nB - int(self.B[i]) - self.B[J].astype(np.int64) - left_b
        ok = (np.abs(left_a - right_a) <= 3) & (np.abs(left_b - right_b) <= 3)
        return J[ok]


def balanced_cuts(
    points: Sequence[PopulationPoint],
    ids: Optional[Sequence[int]] = None,
    eps_on: float = 0.0,
) -> Iterator[OrientedCut]:
    """Yield balanced cuts with pairwise distinct bipartitions.

    Candidates come pivot by pivot in index order, so the sequence is fully
    determined by the input.  ``ids`` names the points for the symbolic
    perturbation (defaults to their positions in ``points``).  Points within
    ``eps_on`` of a candidate line (never less than :func:`cut_tolerance`)
    count as lying on it.
    """
    inst = _Instance(points, ids, eps_on)
    if inst.n == 0:
        raise CutError("cannot cut an empty population")
    if inst.n == 1:
        p = inst.points[0].location
        yield OrientedCut(Line2.through(p, (0.0, 1.0)), ((0, Side.POSITIVE),), inst.eps)
        return
    seen = set()
    tested = set()
    for i in range(inst.n):
        for j in inst.sweep_pairs(i):
            j = int(j)
            tested.add((i, j))
            for cut in inst.pair_cuts(i, j):
                key = bipartition(inst.points, cut)
                if key not in seen:
                    seen.add(key)
                    yield cut
    if seen:
        return
    # the filter is heuristic; fall back to every pair before giving up
    for i, j in combinations(range(inst.n), 2):
        if (i, j) in tested:
            continue
        for cut in inst.pair_cuts(i, j):
            key = bipartition(inst.points, cut)
            if key not in seen:
                seen.add(key)
                yield cut


def find_cut(
    points: Sequence[PopulationPoint],
    ids: Optional[Sequence[int]] = None,
    eps_on: float = 0.0,
) -> OrientedCut:
    """A line halving both the total population and the subpopulation.

    Raises :class:`CutSearchError` if nothing is found; an unbalanced cut
    is never returned.
    """
    for cut in balanced_cuts(points, ids, eps_on):
        if verify_cut(points, cut).balanced:
            return cut
    raise CutSearchError(f"no balanced cut found for {len(points)} points")


def oracle_find_all_cuts(
    points: Sequence[PopulationPoint],
    ids: Optional[Sequence[int]] = None,
    cap: int = ORACLE_CAP,
    eps_on: float = 0.0,
) -> List[OrientedCut]:
    """Every balanced cut up to equal bipartitions, by exhaustive search.

    Scalar code throughout: each pair of points, each of the four
    polarities, each point classified with :func:`side_of`.
    """
    n = len(points)
    if n > cap:
        raise SizeCapError(f"oracle is limited to {cap} points, got {n}")
    if n == 0:
        raise CutError("cannot cut an empty population")
    ids = list(range(n)) if ids is None else list(ids)
    eps = max(cut_tolerance(points), eps_on)
    n_b = sum(1 for p in points if p.in_subpop)
    if n == 1:
        p = points[0].location
        return [OrientedCut(Line2.through(p, (0.0, 1.0)), ((0, Side.POSITIVE),), eps)]

    out: List[OrientedCut] = []
    seen = set()
    for i, j in combinations(range(n), 2):
        pi, pj = points[i].location, points[j].location
        line = Line2.through(pi, _pair_direction(pi, pj, ids[i], ids[j]))
        sides = [side_of(line, p.location, eps) for p in points]
        if sides[i] is not Side.ON or sides[j] is not Side.ON:
            continue
        for k, s in enumerate(sides):
            if s is Side.ON and k not in (i, j):
                sides[k] = symbolic_side(line, pi, pj, points[k].location, ids[i], ids[j], ids[k])
        for si, sj in POLARITIES:
            sides[i], sides[j] = si, sj
            pos = frozenset(k for k, s in enumerate(sides) if s is Side.POSITIVE)
            neg = frozenset(range(n)) - pos
            pos_b = sum(1 for k in pos if points[k].in_subpop)
            if abs(2 * len(pos) - n) > 1 or abs(2 * pos_b - n_b) > 1:
                continue
            key = frozenset((pos, neg))
            if key in seen:
                continue
            seen.add(key)
            on_line = {k: sides[k] for k, p in enumerate(points)
                       if side_of(line, p.location, eps) is Side.ON}
            out.append(OrientedCut(line, tuple(sorted(on_line.items())), eps))
    return out
