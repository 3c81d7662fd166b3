"""Intrinsic Čech and Vietoris-Rips filtrations (up to dimension 2) on a discretized graph.

Every simplex gets the smallest radius eps at which the closed eps-balls
around its vertices share a point of the graph. For an edge that is half
the distance between its endpoints. For a triangle it is the graph 1-center
radius of its three vertices, min over points w of max_i d(w, x_i). The
minimum is computed exactly, edge by edge of the discretization: on an
edge (u, v, L) the distance from w(t) to a sample p is
min(d(u,p) + t, d(v,p) + L - t), so the objective is a max of three
tent functions with slopes +1/-1 and its minimum sits at t = 0, t = L, or
where a rising line of one sample meets a falling line of another.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .loops import LoopSystem, shortest_system
from .metric_graph import Discretization, DistanceOracle, MetricGraph, all_pairs_distances

Model = Literal["cech", "rips"]

# (triangles x graph edges) entries handled per vectorized block
_BLOCK = 1 << 15


class Simplex(NamedTuple):
    vertices: tuple[int, ...]
    value: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


def filtration_key(s: Simplex) -> tuple:
    return (s.value, len(s.vertices), s.vertices)


@dataclass(frozen=True)
class FilteredComplex:
    simplices: tuple[Simplex, ...]
    model: str
    eps_max: float
    discretization: Discretization | None = None

    def __len__(self) -> int:
        return len(self.simplices)

    def count(self, dim: int) -> int:
        return sum(1 for s in self.simplices if s.dim == dim)

    def dump(self) -> str:
        """One ``dim value v0 v1 [v2]`` line per simplex, in filtration order."""
        names = self.discretization.graph.vertices if self.discretization is not None else None
        lines = []
        for s in self.simplices:
            vs = [names[v] for v in s.vertices] if names else [str(v) for v in s.vertices]
            lines.append(f"{s.dim} {s.value!r} " + " ".join(vs))
        return "\n".join(lines)


def edge_value(oracle: DistanceOracle, x: int, y: int) -> float:
    return float(oracle.dist[x, y]) / 2


def _finite(dist: np.ndarray) -> np.ndarray:
    finite = dist[np.isfinite(dist)]
    big = 4.0 * (float(finite.max()) if finite.size else 1.0) + 1.0
    return np.where(np.isfinite(dist), dist, big)


def _graph_edges(g: MetricGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    vi = g.vertex_index
    U = np.array([vi[e.u] for e in g.edges], dtype=np.int64)
    V = np.array([vi[e.v] for e in g.edges], dtype=np.int64)
    L = np.array([e.length for e in g.edges], dtype=float)
    return U, V, L


def _edge_minima(A: np.ndarray, B: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Exact min over t in [0, L] of max_p min(A_p + t, B_p + L - t); A, B have shape (P, 3)."""
    # rising line of sample p meets falling line of sample q
    cross = (B[:, None, :] + L[:, None, None] - A[:, :, None]) / 2  # (P, 3, 3)
    P = len(L)
    t = np.concatenate([np.zeros((P, 1)), L[:, None], cross.reshape(P, 9)], axis=1)
    t = np.clip(t, 0.0, L[:, None])  # (P, 11)
    up = A[:, :, None] + t[:, None, :]
    down = B[:, :, None] + (L[:, None] - t)[:, None, :]
    return np.minimum(up, down).max(axis=1).min(axis=1)


def one_center_radii(dist: np.ndarray, edges: tuple[np.ndarray, np.ndarray, np.ndarray],
                     triples: np.ndarray) -> np.ndarray:
    """Exact graph 1-center radius of every row of ``triples`` (shape (k, 3)).

    The objective is 1-Lipschitz along the graph, so an edge (u, v, L) can
    only hold a point better than the best vertex R if
    (F(u) + F(v) - L) / 2 <= R. Only those edges are solved exactly.
    """
    U, V, L = edges
    T = np.asarray(triples, dtype=np.int64)
    rows = dist[T]  # (k, 3, n)
    F = rows.max(axis=1)  # objective at every vertex
    best = F.min(axis=1)
    if len(L) == 0:
        return best
    bound = (F[:, U] + F[:, V] - L) / 2
    ti, ei = np.nonzero(bound <= best[:, None] + 1e-12 * (1.0 + best[:, None]))
    if ti.size == 0:
        return best
    A = rows[ti, :, U[ei]]  # (P, 3)
    B = rows[ti, :, V[ei]]
    vals = _edge_minima(A, B, L[ei])
    out = best.copy()
    np.minimum.at(out, ti, vals)
    return out


def triangle_value(d: Discretization, oracle: DistanceOracle, x: int, y: int, z: int,
                   model: Model = "cech") -> float:
    D = oracle.dist
    rips = max(D[x, y], D[x, z], D[y, z]) / 2
    if model == "rips":
        return float(rips)
    r = one_center_radii(_finite(D), _graph_edges(d.graph), np.array([[x, y, z]]))[0]
    return float(max(r, rips))


def _candidate_triangles(keep: np.ndarray) -> np.ndarray:
    n = keep.shape[0]
    out = []
    for i in range(n):
        nbrs = np.flatnonzero(keep[i, i + 1:]) + i + 1
        for j in nbrs:
            ks = np.flatnonzero(keep[i, j + 1:] & keep[j, j + 1:]) + j + 1
            if ks.size:
                block = np.empty((ks.size, 3), dtype=np.int64)
                block[:, 0] = i
                block[:, 1] = j
                block[:, 2] = ks
                out.append(block)
    return np.concatenate(out) if out else np.empty((0, 3), dtype=np.int64)


def build_filtration(d: Discretization, model: Model = "cech", eps_max: float = math.inf,
                     oracle: DistanceOracle | None = None, threads: int = 1) -> FilteredComplex:
    if model not in ("cech", "rips"):
        raise ValueError(f"unknown model {model!r}")
    if not eps_max > 0:
        raise ValueError(f"eps_max must be positive, got {eps_max}")
    oracle = oracle if oracle is not None else all_pairs_distances(d.graph)
    D = oracle.dist
    n = D.shape[0]
    half = D / 2
    tol = _value_tolerance(D)
    keep = np.isfinite(D) & (half <= eps_max)
    np.fill_diagonal(keep, False)

    simplices = [Simplex((i,), 0.0) for i in range(n)]
    iu, ju = np.nonzero(np.triu(keep, 1))
    simplices += [Simplex((int(i), int(j)), float(half[i, j])) for i, j in zip(iu, ju)]

    tri = _candidate_triangles(keep)
    if len(tri):
        rips = np.maximum(np.maximum(half[tri[:, 0], tri[:, 1]], half[tri[:, 0], tri[:, 2]]),
                          half[tri[:, 1], tri[:, 2]])
        if model == "rips":
            values = rips
        else:
            Df = _finite(D)
            edges = _graph_edges(d.graph)
            step = max(1, _BLOCK // max(1, len(edges[2])))
            blocks = [tri[s:s + step] for s in range(0, len(tri), step)]
            if threads > 1:
                with ThreadPoolExecutor(threads) as pool:
                    parts = list(pool.map(lambda b: one_center_radii(Df, edges, b), blocks))
            else:
                parts = [one_center_radii(Df, edges, b) for b in blocks]
            # rounding must not put a triangle below its own edges
            values = np.maximum(np.concatenate(parts), rips)
        # a triangle landing a rounding error above the cutoff still belongs
        ok = values <= eps_max + tol
        values = np.minimum(values, eps_max)
        simplices += [Simplex((int(a), int(b), int(c)), float(v))
                      for (a, b, c), v in zip(tri[ok], values[ok])]

    simplices = _merge_close_values(simplices, tol)
    simplices.sort(key=filtration_key)
    return FilteredComplex(tuple(simplices), model, float(eps_max), d)


def _value_tolerance(dist: np.ndarray) -> float:
    finite = dist[np.isfinite(dist)]
    return 1e-9 * max(1.0, float(finite.max()) if finite.size else 1.0)


def _merge_close_values(simplices: list[Simplex], tol: float) -> list[Simplex]:
    """Give values within ``tol`` of their sorted predecessor that predecessor's value.

    Distances summed along different paths disagree in the last bits, which
    would otherwise show up as zero-length persistence pairs and unstable
    tie order.
    """
    if not simplices:
        return simplices
    values = np.array([s.value for s in simplices])
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    new_run = np.empty(len(values), dtype=bool)
    new_run[0] = True
    new_run[1:] = np.diff(sorted_vals) > tol
    rep = sorted_vals[np.flatnonzero(new_run)[np.cumsum(new_run) - 1]]
    merged = values.copy()
    merged[order] = rep
    return [Simplex(s.vertices, float(v)) for s, v in zip(simplices, merged)]


class ScaleCheck(NamedTuple):
    valid: bool
    message: str
    shortest_loop: float | None


def validate_scale(g: MetricGraph, delta: float, system: LoopSystem | None = None) -> ScaleCheck:
    """Whether ``delta`` is below a quarter of the shortest loop length."""
    system = system if system is not None else shortest_system(g)
    if not system.loops:
        return ScaleCheck(True, "no loops: any delta is valid", None)
    l1 = system.lengths[0]
    bound = l1 / 4
    if delta < bound:
        return ScaleCheck(True, f"delta={delta} < l1/4={bound} (l1={l1})", l1)
    return ScaleCheck(False, f"delta={delta} must be < l1/4={bound} (l1={l1})", l1)
