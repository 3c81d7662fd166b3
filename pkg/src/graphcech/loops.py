"""Shortest systems of loops via Horton candidates and greedy Z2 selection.

Minimum-weight cycle bases over Z2 are bases of a matroid, so taking
candidates in order of length and keeping each one that is independent of
those already kept yields the lexicographically smallest length-sequence,
as long as the candidate pool contains some minimum basis. The Horton set
does.

Lengths are compared exactly. Each loop length is ``math.fsum`` over the
input graph's edge lengths, so the same edge set always gets the same
length regardless of traversal order. Inputs meant to have ties should use
exactly representable lengths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .metric_graph import DistanceOracle, MetricGraph, all_pairs_distances, genus, normalize


class Z2Basis:
    """Row-reduced set of Z2 vectors stored as Python ints (bit k = coordinate k)."""

    def __init__(self) -> None:
        self._rows: dict[int, int] = {}  # pivot bit -> vector with that highest bit

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def is_independent(self, v: int) -> bool:
        return self.reduce(v) != 0

    def add(self, v: int) -> bool:
        """Insert ``v`` if independent; returns whether it was inserted."""
        r = self.reduce(v)
        if not r:
            return False
        self._rows[r.bit_length() - 1] = r
        return True


@dataclass(frozen=True)
class Loop:
    edges: tuple[str, ...]  # sorted edge ids
    walk: tuple[str, ...]  # closed vertex walk, first == last
    length: float
    z2vector: int

    @property
    def key(self) -> tuple[float, tuple[str, ...]]:
        return (self.length, self.edges)


@dataclass(frozen=True)
class LoopSystem:
    loops: tuple[Loop, ...]

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(c.length for c in self.loops)

    @property
    def genus(self) -> int:
        return len(self.loops)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "loops": [{"length": c.length, "edges": list(c.edges), "walk": list(c.walk)} for c in self.loops],
        }


def _make_loop(g: MetricGraph, edge_idx: list[int], walk: list[int]) -> Loop:
    edges = tuple(sorted(g.edges[k].id for k in edge_idx))
    vec = 0
    for k in edge_idx:
        vec |= 1 << k
    length = math.fsum(g.edges[k].length for k in edge_idx)
    return Loop(edges, tuple(g.vertices[x] for x in walk), length, vec)


def candidate_cycles(g: MetricGraph, oracle: DistanceOracle | None = None) -> list[Loop]:
    """Horton candidates ``sp(r,x) + (x,y) + sp(y,r)`` that are simple cycles.

    ``g`` must be simple. The result is deduplicated by edge set and sorted by
    ``(length, edge ids)``.
    """
    if not g.is_simple():
        raise ValueError("candidate_cycles needs a simple graph; call normalize() first")
    oracle = oracle if oracle is not None else all_pairs_distances(g)
    vi = g.vertex_index
    pe = oracle.pred_edge
    found: dict[tuple[str, ...], Loop] = {}
    for r in range(len(g.vertices)):
        for k, e in enumerate(g.edges):
            x, y = vi[e.u], vi[e.v]
            if not (oracle.dist[r, x] < math.inf and oracle.dist[r, y] < math.inf):
                continue
            if pe[r, x] == k or pe[r, y] == k:
                continue
            px = oracle.path_vertices(r, x)
            py = oracle.path_vertices(r, y)
            if len(set(px) & set(py)) != 1:
                continue
            edge_idx = oracle.path_edges(r, x) + [k] + oracle.path_edges(r, y)
            loop = _make_loop(g, edge_idx, px + py[::-1])
            found.setdefault(loop.edges, loop)
    return sorted(found.values(), key=lambda c: c.key)


def _lift(g: MetricGraph, h: MetricGraph, loop: Loop) -> Loop:
    """Express a loop of the normalized graph ``h`` in the edges of the input ``g``."""
    if h is g:
        return loop
    origin = {piece: orig for orig, chain in h.provenance.items() for piece in chain}
    edges = sorted({origin.get(eid, eid) for eid in loop.edges})
    ei = g.edge_index
    vec = 0
    for eid in edges:
        vec |= 1 << ei[eid]
    keep = set(g.vertices)
    walk = tuple(v for v in loop.walk if v in keep)
    if walk[0] != walk[-1]:
        walk += walk[:1]
    length = math.fsum(g.edges[ei[eid]].length for eid in edges)
    return Loop(tuple(edges), walk, length, vec)


def shortest_system(g: MetricGraph) -> LoopSystem:
    """Lexicographically shortest homology basis of ``g``, reported in ``g``'s own edge ids."""
    h = normalize(g)
    target = genus(g)
    if target == 0:
        return LoopSystem(())
    candidates = sorted((_lift(g, h, c) for c in candidate_cycles(h)), key=lambda c: c.key)
    basis = Z2Basis()
    chosen: list[Loop] = []
    for c in candidates:
        if basis.add(c.z2vector):
            chosen.append(c)
            if len(chosen) == target:
                break
    if len(chosen) != target:
        raise RuntimeError(f"found only {len(chosen)} independent candidates for genus {target}")
    return LoopSystem(tuple(chosen))
