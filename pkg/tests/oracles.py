"""Reference implementations that share no code path with the package.

Each oracle answers the same question as a library routine by a different
method: linear programming instead of candidate lines, L'Huilier's formula
instead of tangent-vector angles, matplotlib's point-in-path instead of our
ray casting.
"""

from __future__ import annotations

import itertools
import math
from typing import FrozenSet, List, Sequence, Set, Tuple

import numpy as np
from matplotlib.path import Path
from scipy.optimize import linprog


def strictly_separable(xy: np.ndarray, pos: Sequence[int], neg: Sequence[int]) -> bool:
    """Is there a line with ``pos`` strictly on one side and ``neg`` on the other?

    Maximises the margin ``t`` of ``a.p - c >= t`` (pos) and ``<= -t`` (neg)
    with ``|a|, |b| <= 1``.
    """
    pos, neg = list(pos), list(neg)
    if not pos or not neg:
        return True
    # variables: a, b, c, t ; maximise t
    rows, rhs = [], []
    for k in pos:
        rows.append([-xy[k, 0], -xy[k, 1], 1.0, 1.0])
        rhs.append(0.0)
    for k in neg:
        rows.append([xy[k, 0], xy[k, 1], -1.0, 1.0])
        rhs.append(0.0)
    scale = max(1.0, float(np.abs(xy).max()))
    res = linprog(c=[0, 0, 0, -1], A_ub=rows, b_ub=rhs,
                  bounds=[(-1, 1), (-1, 1), (-4 * scale, 4 * scale), (None, 1)],
                  method="highs")
    return res.status == 0 and -res.fun > 1e-9 * scale


def balanced_bipartitions(xy: np.ndarray, subpop: Sequence[bool],
                          ids: Sequence[int]) -> Set[FrozenSet[FrozenSet[int]]]:
    """All strictly separable bipartitions balanced for both populations.

    Exhaustive over subsets; valid for points in general position.
    """
    n = len(ids)
    nb = sum(1 for k in range(n) if subpop[k])
    out = set()
    for r in range(n // 2, (n + 1) // 2 + 1):
        for S in itertools.combinations(range(n), r):
            Sc = [k for k in range(n) if k not in S]
            if abs(2 * len(S) - n) > 1:
                continue
            if abs(2 * sum(1 for k in S if subpop[k]) - nb) > 1:
                continue
            if strictly_separable(xy, S, Sc):
                out.add(frozenset((frozenset(ids[k] for k in S),
                                   frozenset(ids[k] for k in Sc))))
    return out


def outcome_set(xy: np.ndarray, subpop: Sequence[bool], n: int, depth: int):
    """Distinct districtings by recursive LP bipartitions and set partitions of leaves."""

    def leaf_multisets(ids: Tuple[int, ...], d: int) -> Set[Tuple[Tuple[int, ...], ...]]:
        if d == 0:
            return {(ids,)}
        if not ids:
            splits = [((), ())]
        else:
            sub_xy = xy[list(ids)]
            sub_b = [subpop[k] for k in ids]
            splits = []
            for bip in balanced_bipartitions(sub_xy, sub_b, ids):
                a, b = sorted(tuple(sorted(s)) for s in bip)
                splits.append((a, b))
        res = set()
        for a, b in splits:
            for la in leaf_multisets(a, d - 1):
                for lb in leaf_multisets(b, d - 1):
                    res.add(tuple(sorted(la + lb)))
        return res

    leaves = 2 ** depth
    q, r = divmod(leaves, n)
    sizes = [q + 1] * r + [q] * (n - r)
    orders = set(itertools.permutations(sizes))
    outcomes = set()
    for ls in leaf_multisets(tuple(range(len(xy))), depth):
        for perm in itertools.permutations(range(leaves)):
            for order in orders:
                districts, pos = [], 0
                for s in order:
                    districts.append(tuple(sorted(k for g in perm[pos:pos + s] for k in ls[g])))
                    pos += s
                outcomes.add(tuple(sorted(districts)))
    return outcomes


def lhuilier_area(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Spherical excess of a unit-sphere triangle from its side lengths."""
    def arc(u, v):
        return math.atan2(np.linalg.norm(np.cross(u, v)), float(u @ v))

    x, y, z = arc(b, c), arc(c, a), arc(a, b)
    s = 0.5 * (x + y + z)
    t = (math.tan(s / 2) * math.tan((s - x) / 2) * math.tan((s - y) / 2) * math.tan((s - z) / 2))
    return 4.0 * math.atan(math.sqrt(max(t, 0.0)))


def path_contains(vertices: Sequence[Tuple[float, float]], pt: Tuple[float, float]) -> bool:
    return bool(Path(np.asarray(vertices)).contains_point(pt))


def all_groupings_bruteforce(items: Sequence[int], sizes: Sequence[int]) -> Set[Tuple[Tuple[int, ...], ...]]:
    out = set()
    for perm in itertools.permutations(items):
        for order in set(itertools.permutations(sizes)):
            groups, pos = [], 0
            for s in order:
                groups.append(tuple(sorted(perm[pos:pos + s])))
                pos += s
            out.add(tuple(sorted(groups)))
    return out


__all__: List[str] = [
    "strictly_separable", "balanced_bipartitions", "outcome_set", "lhuilier_area",
    "path_contains", "all_groupings_bruteforce",
]
