"""Finite metric graphs: storage, validation, shortest-path metric, subdivision."""
from __future__ import annotations

import heapq
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np


class GraphFormatError(ValueError):
    """Raised when a graph file or record fails validation."""


class Edge(NamedTuple):
    id: str
    u: str
    v: str
    length: float


class GraphPoint(NamedTuple):
    """A point on edge ``edge`` at arclength ``offset`` from its ``u`` end."""

    edge: str
    offset: float


@dataclass(frozen=True)
class MetricGraph:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    # original edge id -> chain of edge ids that replaced it (empty for input graphs)
    provenance: Mapping[str, tuple[str, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(Edge(*e) for e in self.edges))
        validate(self)

    @classmethod
    def from_edges(cls, edges: Sequence[Sequence], vertices: Sequence[str] | None = None) -> MetricGraph:
        """Build a graph from ``(id, u, v, length)`` records; vertices default to the endpoints."""
        edges = [Edge(str(e[0]), str(e[1]), str(e[2]), float(e[3])) for e in edges]
        if vertices is None:
            seen: dict[str, None] = {}
            for e in edges:
                seen.setdefault(e.u)
                seen.setdefault(e.v)
            vertices = list(seen)
        return cls(tuple(str(v) for v in vertices), tuple(edges))

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.edge_index[edge_id]]

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int, float]]]:
        """Per vertex index: ``(neighbor index, edge index, length)`` sorted by edge id."""
        adj: list[list[tuple[int, int, float]]] = [[] for _ in self.vertices]
        vi = self.vertex_index
        for k, e in enumerate(self.edges):
            a, b = vi[e.u], vi[e.v]
            adj[a].append((b, k, e.length))
            if a != b:
                adj[b].append((a, k, e.length))
        for row in adj:
            row.sort(key=lambda t: self.edges[t[1]].id)
        return adj

    @property
    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    def is_simple(self) -> bool:
        pairs = Counter(frozenset((e.u, e.v)) for e in self.edges)
        return all(e.u != e.v for e in self.edges) and all(c == 1 for c in pairs.values())

    def scaled(self, factor: float) -> MetricGraph:
        return MetricGraph(self.vertices, tuple(e._replace(length=e.length * factor) for e in self.edges))

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[e.id, e.u, e.v, e.length] for e in self.edges],
        }


def validate(g: MetricGraph) -> None:
    seen_v: set[str] = set()
    for v in g.vertices:
        if v in seen_v:
            raise GraphFormatError(f"duplicate vertex id: {v!r}")
        seen_v.add(v)
    seen_e: set[str] = set()
    for e in g.edges:
        if e.id in seen_e:
            raise GraphFormatError(f"duplicate edge id: {list(e)!r}")
        seen_e.add(e.id)
        if not (isinstance(e.length, (int, float)) and math.isfinite(e.length)):
            raise GraphFormatError(f"non-finite length: {list(e)!r}")
        if e.length <= 0:
            raise GraphFormatError(f"nonpositive length: {list(e)!r}")
        for end in (e.u, e.v):
            if end not in seen_v:
                raise GraphFormatError(f"dangling endpoint {end!r}: {list(e)!r}")


def from_json(data: object) -> MetricGraph:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise GraphFormatError('graph JSON must be an object with "vertices" and "edges"')
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise GraphFormatError(f'"vertices" must be a list of strings: {verts!r}')
    edges = []
    for rec in data["edges"]:
        if not (isinstance(rec, list) and len(rec) == 4):
            raise GraphFormatError(f"edge record must be [id, u, v, length]: {rec!r}")
        eid, u, v, length = rec
        if not all(isinstance(x, str) for x in (eid, u, v)):
            raise GraphFormatError(f"edge ids and endpoints must be strings: {rec!r}")
        if isinstance(length, bool) or not isinstance(length, (int, float)):
            raise GraphFormatError(f"edge length must be a number: {rec!r}")
        edges.append(Edge(eid, u, v, float(length)))
    return MetricGraph(tuple(verts), tuple(edges))


def load(path: str | Path) -> MetricGraph:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: parse error: {exc}") from exc
    return from_json(data)


def dumps(g: MetricGraph) -> str:
    return json.dumps(g.to_json(), indent=1)


def save(g: MetricGraph, path: str | Path) -> None:
    Path(path).write_text(dumps(g) + "\n")


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def normalize(g: MetricGraph) -> MetricGraph:
    """Make ``g`` simple without changing its metric or topology.

    Self-loops become triangles of three equal edges; every member of a
    parallel class is split at its midpoint. Simple graphs come back as-is.
    """
    if g.is_simple():
        return g
    multiplicity = Counter(frozenset((e.u, e.v)) for e in g.edges)
    vnames = set(g.vertices)
    enames = {e.id for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    provenance: dict[str, tuple[str, ...]] = {}
    for e in g.edges:
        if e.u == e.v:
            a = _fresh(f"{e.id}:a", vnames)
            b = _fresh(f"{e.id}:b", vnames)
            vertices += [a, b]
            piece = e.length / 3
            chain = [(e.u, a), (a, b), (b, e.v)]
        elif multiplicity[frozenset((e.u, e.v))] > 1:
            m = _fresh(f"{e.id}:m", vnames)
            vertices.append(m)
            piece = e.length / 2
            chain = [(e.u, m), (m, e.v)]
        else:
            edges.append(e)
            continue
        ids = []
        for i, (x, y) in enumerate(chain):
            eid = _fresh(f"{e.id}:{i}", enames)
            ids.append(eid)
            edges.append(Edge(eid, x, y, piece))
        provenance[e.id] = tuple(ids)
    return MetricGraph(tuple(vertices), tuple(edges), provenance)


def components(g: MetricGraph) -> list[list[int]]:
    """Connected components as lists of vertex indices, in order of first vertex."""
    seen = [False] * len(g.vertices)
    comps = []
    for s in range(len(g.vertices)):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y, _, _ in g.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def genus(g: MetricGraph) -> int:
    """First Betti number |E| - |V| + #components."""
    return len(g.edges) - len(g.vertices) + len(components(g))


@dataclass(frozen=True)
class DistanceOracle:
    """All-pairs shortest-path distances over vertex indices.

    ``pred_vertex[s, x]``/``pred_edge[s, x]`` give the last hop of the chosen
    shortest path from ``s`` to ``x`` (-1 at the source and when unreachable).
    """

    graph: MetricGraph
    dist: np.ndarray
    pred_vertex: np.ndarray
    pred_edge: np.ndarray

    def __call__(self, x: str, y: str) -> float:
        vi = self.graph.vertex_index
        return float(self.dist[vi[x], vi[y]])

    def path_edges(self, source: int, target: int) -> list[int]:
        """Edge indices along the tree path ``source -> target`` (target end first)."""
        out = []
        x = target
        while x != source:
            k = int(self.pred_edge[source, x])
            if k < 0:
                raise ValueError(f"vertex {target} unreachable from {source}")
            out.append(k)
            x = int(self.pred_vertex[source, x])
        return out

    def path_vertices(self, source: int, target: int) -> list[int]:
        out = [target]
        x = target
        while x != source:
            x = int(self.pred_vertex[source, x])
            if x < 0:
                raise ValueError(f"vertex {target} unreachable from {source}")
            out.append(x)
        return out[::-1]


def _dijkstra(g: MetricGraph, source: int, edge_rank: list[int]):
    n = len(g.vertices)
    dist = [math.inf] * n
    pv = [-1] * n
    pe = [-1] * n
    dist[source] = 0.0
    done = [False] * n
    heap = [(0.0, source)]
    while heap:
        d, x = heapq.heappop(heap)
        if done[x]:
            continue
        done[x] = True
        for y, k, length in g.adjacency[x]:
            if done[y]:
                continue
            nd = d + length
            if nd < dist[y]:
                dist[y], pv[y], pe[y] = nd, x, k
                heapq.heappush(heap, (nd, y))
            elif nd == dist[y] and edge_rank[k] < edge_rank[pe[y]]:
                pv[y], pe[y] = x, k
    return dist, pv, pe


def all_pairs_distances(g: MetricGraph) -> DistanceOracle:
    """Dijkstra from every vertex; equal-distance ties go to the smallest predecessor edge id."""
    order = sorted(range(len(g.edges)), key=lambda k: g.edges[k].id)
    edge_rank = [0] * len(g.edges)
    for r, k in enumerate(order):
        edge_rank[k] = r
    n = len(g.vertices)
    dist = np.full((n, n), np.inf)
    pv = np.full((n, n), -1, dtype=np.int64)
    pe = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        dist[s], pv[s], pe[s] = _dijkstra(g, s, edge_rank)
    # the two directions of a path sum the same lengths in different orders
    dist = np.minimum(dist, dist.T)
    for arr in (dist, pv, pe):
        arr.setflags(write=False)
    return DistanceOracle(g, dist, pv, pe)


def floyd_warshall(g: MetricGraph) -> np.ndarray:
    """Dense O(n^3) all-pairs distances; a cross-check for small graphs."""
    n = len(g.vertices)
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    vi = g.vertex_index
    for e in g.edges:
        a, b = vi[e.u], vi[e.v]
        if a != b:
            d[a, b] = d[b, a] = min(d[a, b], e.length)
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def point_distance(g: MetricGraph, oracle: DistanceOracle, p: GraphPoint, q: GraphPoint) -> float:
    ep, eq = g.edge(p.edge), g.edge(q.edge)
    for pt, e in ((p, ep), (q, eq)):
        if not 0.0 <= pt.offset <= e.length:
            raise ValueError(f"offset {pt.offset} outside edge {e.id} of length {e.length}")
    vi = g.vertex_index
    D = oracle.dist
    p_ends = ((vi[ep.u], p.offset), (vi[ep.v], ep.length - p.offset))
    q_ends = ((vi[eq.u], q.offset), (vi[eq.v], eq.length - q.offset))
    best = min(a_off + D[a, b] + b_off for a, a_off in p_ends for b, b_off in q_ends)
    if ep.id == eq.id:
        best = min(best, abs(p.offset - q.offset))
    return float(best)


@dataclass(frozen=True)
class Discretization:
    graph: MetricGraph
    delta: float
    provenance: Mapping[str, tuple[str, ...]]
    source: MetricGraph

    @cached_property
    def original_vertices(self) -> list[int]:
        vi = self.graph.vertex_index
        return [vi[v] for v in self.source.vertices]


def delta_discretize(g: MetricGraph, delta: float) -> Discretization:
    """Split each edge of length L into ceil(L/delta) equal pieces."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    vnames = set(g.vertices)
    enames = {e.id for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    provenance: dict[str, tuple[str, ...]] = {}
    for e in g.edges:
        k = max(1, math.ceil(e.length / delta))
        # the quotient can round up past an exact integer (3 / 0.15 -> 20.000000000000004)
        if k > 1 and e.length / (k - 1) <= delta:
            k -= 1
        if k == 1:
            edges.append(e)
            provenance[e.id] = (e.id,)
            continue
        piece = e.length / k
        inner = [_fresh(f"{e.id}#{i}", vnames) for i in range(1, k)]
        vertices += inner
        chain = [e.u, *inner, e.v]
        ids = []
        for i in range(k):
            eid = _fresh(f"{e.id}#{i}", enames)
            ids.append(eid)
            edges.append(Edge(eid, chain[i], chain[i + 1], piece))
        provenance[e.id] = tuple(ids)
    return Discretization(MetricGraph(tuple(vertices), tuple(edges), provenance), float(delta), provenance, g)

