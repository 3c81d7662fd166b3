"""Brute-force references used by the tests. None of this touches the code paths it checks."""
from __future__ import annotations

import itertools
import math

import numpy as np

from graphcech.metric_graph import MetricGraph


def dense_distances(g: MetricGraph) -> np.ndarray:
    """Floyd-Warshall written with plain loops."""
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0.0
    for e in g.edges:
        a, b = idx[e.u], idx[e.v]
        if a != b and e.length < d[a][b]:
            d[a][b] = d[b][a] = e.length
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return np.array(d)


def simple_cycles(g: MetricGraph) -> list[tuple[frozenset[str], float]]:
    """Every edge subset whose support is connected and 2-regular (fine for <= 16 edges)."""
    edges = list(g.edges)
    out = []
    for r in range(1, len(edges) + 1):
        for subset in itertools.combinations(edges, r):
            deg: dict[str, int] = {}
            for e in subset:
                deg[e.u] = deg.get(e.u, 0) + 1
                deg[e.v] = deg.get(e.v, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            # connectivity of the support
            adj: dict[str, set[str]] = {v: set() for v in deg}
            for e in subset:
                adj[e.u].add(e.v)
                adj[e.v].add(e.u)
            start = next(iter(adj))
            seen, stack = {start}, [start]
            while stack:
                x = stack.pop()
                for y in adj[x] - seen:
                    seen.add(y)
                    stack.append(y)
            if len(seen) == len(adj):
                out.append((frozenset(e.id for e in subset), math.fsum(e.length for e in subset)))
    return out


def _rank_gf2(vectors: list[int]) -> int:
    rank = 0
    rows = list(vectors)
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows]
    return rank


def min_basis_lengths(g: MetricGraph, genus: int) -> tuple[float, ...]:
    """Lexicographically smallest sorted length tuple over all independent g-subsets of simple cycles."""
    if genus == 0:
        return ()
    pos = {e.id: k for k, e in enumerate(g.edges)}
    cycles = []
    for ids, length in simple_cycles(g):
        vec = 0
        for eid in ids:
            vec |= 1 << pos[eid]
        cycles.append((vec, length))
    best = None
    for combo in itertools.combinations(cycles, genus):
        if _rank_gf2([c[0] for c in combo]) != genus:
            continue
        key = tuple(sorted(c[1] for c in combo))
        if best is None or key < best:
            best = key
    return best


def grid_one_center(g: MetricGraph, points: list[str], step: float) -> float:
    """min over grid points w on every edge of max_p d(w, p), using dense_distances."""
    D = dense_distances(g)
    idx = {v: i for i, v in enumerate(g.vertices)}
    targets = [idx[p] for p in points]
    best = math.inf
    for e in g.edges:
        k = max(1, math.ceil(e.length / step))
        for s in range(k + 1):
            t = e.length * s / k
            far = max(min(D[idx[e.u], p] + t, D[idx[e.v], p] + e.length - t) for p in targets)
            best = min(best, far)
    return best


def bottleneck_bruteforce(A, B) -> float:
    """Try every assignment of A and B points to each other or to the diagonal."""
    A, B = list(A), list(B)
    n, m = len(A), len(B)
    best = math.inf
    # pad with diagonal slots, then try every permutation
    left = A + [None] * m
    right = B + [None] * n
    for perm in itertools.permutations(range(n + m)):
        cost = 0.0
        for i, j in enumerate(perm):
            p, q = left[i], right[j]
            if p is None and q is None:
                c = 0.0
            elif p is None:
                c = (q[1] - q[0]) / 2
            elif q is None:
                c = (p[1] - p[0]) / 2
            else:
                c = max(abs(p[0] - q[0]), abs(p[1] - q[1]))
            cost = max(cost, c)
            if cost >= best:
                break
        best = min(best, cost)
    return best


def betti_by_rank(simplices, eps: float) -> list[int]:
    """Betti numbers (dims 0, 1) of the subcomplex with value <= eps, by GF(2) ranks."""
    present = [s for s in simplices if s.value <= eps]
    by_dim: dict[int, list] = {0: [], 1: [], 2: []}
    for s in present:
        by_dim[len(s.vertices) - 1].append(s.vertices)
    index = {d: {v: i for i, v in enumerate(by_dim[d])} for d in by_dim}

    def boundary_rank(d: int) -> int:
        vecs = []
        for verts in by_dim[d]:
            vec = 0
            for drop in range(len(verts)):
                face = verts[:drop] + verts[drop + 1:]
                vec |= 1 << index[d - 1][face]
            vecs.append(vec)
        return _rank_gf2(vecs)

    r1, r2 = boundary_rank(1), boundary_rank(2)
    return [len(by_dim[0]) - r1, len(by_dim[1]) - r1 - r2]
