"""Z2 persistent homology by boundary-matrix column reduction, and bottleneck distance."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

from .cech_complex import FilteredComplex, Simplex

Point = tuple[float, float]

# dense columns are only allowed for complexes below this size
BITSET_LIMIT = 4096


class NonMonotoneFiltration(ValueError):
    """A face is missing, comes after its coface, or has a larger value."""


@dataclass(frozen=True)
class PersistenceDiagram:
    points: dict[int, tuple[Point, ...]]
    # every pairing incl. zero persistence, as (dim, birth, death)
    raw: tuple[tuple[int, float, float], ...] = field(default=(), compare=False)
    n_simplices: int = field(default=0, compare=False)

    def __getitem__(self, dim: int) -> list[Point]:
        return diagram_points(self, dim)

    @property
    def n_finite_pairs(self) -> int:
        return sum(1 for _, _, d in self.raw if d != math.inf)

    @property
    def n_essential(self) -> int:
        return sum(1 for _, _, d in self.raw if d == math.inf)

    def to_json(self, dim: int) -> dict:
        return diagram_to_json(diagram_points(self, dim), dim)


def diagram_to_json(points: Iterable[Point], dim: int) -> dict:
    return {"dim": dim, "points": [[b, "inf" if d == math.inf else d] for b, d in points]}


def diagram_from_json(data: dict) -> list[Point]:
    return [(float(b), math.inf if d == "inf" else float(d)) for b, d in data["points"]]


def diagram_points(d: PersistenceDiagram, dim: int) -> list[Point]:
    if dim not in (0, 1):
        raise ValueError(f"diagram dimension must be 0 or 1, got {dim}")
    return sorted(d.points.get(dim, ()))


def boundary_columns(fc: FilteredComplex) -> list[list[int]]:
    """Boundary of every simplex as a sorted list of row indices; checks face order."""
    simplices = fc.simplices
    index = {s.vertices: i for i, s in enumerate(simplices)}
    cols: list[list[int]] = []
    for j, s in enumerate(simplices):
        if s.dim == 0:
            cols.append([])
            continue
        rows = []
        for drop in range(len(s.vertices)):
            face = s.vertices[:drop] + s.vertices[drop + 1:]
            i = index.get(face)
            if i is None:
                raise NonMonotoneFiltration(f"face {face} of {s.vertices} is missing")
            if i > j or simplices[i].value > s.value:
                raise NonMonotoneFiltration(
                    f"face {face} (position {i}, value {simplices[i].value}) does not precede "
                    f"coface {s.vertices} (position {j}, value {s.value})"
                )
            rows.append(i)
        rows.sort()
        cols.append(rows)
    return cols


def _reduce_sparse(cols: list[list[int]], order: list[int], cleared: set[int] | None) -> dict[int, int]:
    """Column reduction with set columns; returns ``low row -> column``."""
    pivot: dict[int, int] = {}
    reduced: dict[int, set[int]] = {}
    for j in order:
        if cleared is not None and j in cleared:
            continue
        col = set(cols[j])
        while col:
            low = max(col)
            other = pivot.get(low)
            if other is None:
                pivot[low] = j
                reduced[j] = col
                if cleared is not None:
                    cleared.add(low)
                break
            col ^= reduced[other]
    return pivot


def _reduce_bitset(cols: list[list[int]], order: list[int], cleared: set[int] | None) -> dict[int, int]:
    pivot: dict[int, int] = {}
    reduced: dict[int, int] = {}
    for j in order:
        if cleared is not None and j in cleared:
            continue
        col = 0
        for i in cols[j]:
            col |= 1 << i
        while col:
            low = col.bit_length() - 1
            other = pivot.get(low)
            if other is None:
                pivot[low] = j
                reduced[j] = col
                if cleared is not None:
                    cleared.add(low)
                break
            col ^= reduced[other]
    return pivot


def reduce(fc: FilteredComplex, clearing: bool = True,
           backend: Literal["sparse", "bitset"] = "sparse") -> PersistenceDiagram:
    """Persistence pairs of a face-monotone filtration over Z2.

    With ``clearing`` the columns are reduced from the top dimension down,
    and any column already known to be a pivot row is skipped.
    """
    simplices: Sequence[Simplex] = fc.simplices
    cols = boundary_columns(fc)
    if backend == "bitset":
        if len(simplices) >= BITSET_LIMIT:
            raise ValueError(f"bitset columns need fewer than {BITSET_LIMIT} simplices")
        run = _reduce_bitset
    elif backend == "sparse":
        run = _reduce_sparse
    else:
        raise ValueError(f"unknown backend {backend!r}")

    if clearing:
        top = max((s.dim for s in simplices), default=0)
        cleared: set[int] = set()
        pivot: dict[int, int] = {}
        for dim in range(top, 0, -1):
            order = [j for j, s in enumerate(simplices) if s.dim == dim]
            pivot.update(run(cols, order, cleared))
    else:
        pivot = run(cols, list(range(len(simplices))), None)

    negative = set(pivot.values())
    raw = []
    for low, j in pivot.items():
        raw.append((simplices[low].dim, simplices[low].value, simplices[j].value))
    for i, s in enumerate(simplices):
        if i not in negative and i not in pivot:
            raw.append((s.dim, s.value, math.inf))
    raw.sort()
    points: dict[int, list[Point]] = {}
    for dim, b, d in raw:
        if d > b:
            points.setdefault(dim, []).append((b, d))
    return PersistenceDiagram({k: tuple(v) for k, v in points.items()}, tuple(raw), len(simplices))


# --- bottleneck distance -------------------------------------------------

_TOL = 1e-12


def _linf(p: Point, q: Point) -> float:
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _half_persistence(p: Point) -> float:
    return (p[1] - p[0]) / 2


def _perfect_matching(adj: list[list[int]], n_right: int) -> list[int] | None:
    """Kuhn's augmenting paths; returns ``match_of_right`` or None if imperfect."""
    match_r = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_r[v] < 0 or augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in range(len(adj)):
        if not augment(u, [False] * n_right):
            return None
    return match_r


def _cost_matrix(A: list[Point], B: list[Point]) -> list[list[float]]:
    n, m = len(A), len(B)
    size = n + m
    cost = [[math.inf] * size for _ in range(size)]
    # rows: A then diagonal copies of B; columns: B then diagonal copies of A
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            cost[i][j] = _linf(a, b)
        cost[i][m + i] = _half_persistence(a)
    for j, b in enumerate(B):
        cost[n + j][j] = _half_persistence(b)
        for i in range(n):
            cost[n + j][m + i] = 0.0
    return cost


def bottleneck_matching(d1: Sequence[Point], d2: Sequence[Point]):
    """Bottleneck distance and an optimal matching.

    The matching is a list of ``(p, q)`` with ``None`` standing for the
    diagonal. Infinite-death points are matched among themselves by sorted
    birth; unequal counts give distance inf and an empty matching.
    """
    inf1 = sorted(p for p in d1 if p[1] == math.inf)
    inf2 = sorted(p for p in d2 if p[1] == math.inf)
    if len(inf1) != len(inf2):
        return math.inf, []
    A = [tuple(map(float, p)) for p in d1 if p[1] != math.inf]
    B = [tuple(map(float, p)) for p in d2 if p[1] != math.inf]
    pairs = list(zip(inf1, inf2))
    inf_cost = max((abs(p[0] - q[0]) for p, q in pairs), default=0.0)

    n, m = len(A), len(B)
    if n + m == 0:
        return inf_cost, pairs
    cost = _cost_matrix(A, B)
    values = sorted({c for row in cost for c in row if c != math.inf})
    candidates: list[float] = []
    for c in values:
        if not candidates or c > candidates[-1] + _TOL:
            candidates.append(c)

    def feasible(eps: float):
        adj = [[j for j, c in enumerate(row) if c <= eps + _TOL] for row in cost]
        return _perfect_matching(adj, n + m)

    lo, hi = 0, len(candidates) - 1
    best = feasible(candidates[hi])
    assert best is not None, "the all-diagonal matching is always feasible"
    while lo < hi:
        mid = (lo + hi) // 2
        match = feasible(candidates[mid])
        if match is None:
            lo = mid + 1
        else:
            hi, best = mid, match
    value = candidates[lo]
    for col, row in enumerate(best):
        if row < n and col < m:
            pairs.append((A[row], B[col]))
        elif row < n:
            pairs.append((A[row], None))
        elif col < m:
            pairs.append((None, B[col]))
    return max(value, inf_cost), pairs


def bottleneck(d1: Sequence[Point], d2: Sequence[Point]) -> float:
    return bottleneck_matching(d1, d2)[0]


def canonical(points: Iterable[Point]) -> list[Point]:
    """Sorted multiset without points on the diagonal."""
    return sorted(p for p in points if p[1] > p[0])


def persistence_of(p: Point) -> float:
    return p[1] - p[0]

