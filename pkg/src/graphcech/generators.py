"""Deterministic synthetic metric graphs.

Random graphs use numpy's ``default_rng`` (PCG64), so a given seed gives
the same graph on every platform and numpy release that keeps PCG64 stable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metric_graph import Edge, MetricGraph

FAMILIES = ("cycle", "wedge", "theta", "complete", "random", "tree")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: tuple[float, ...] = ()
    seed: int = 0
    vertices: int | None = None  # cycle only: number of equally spaced vertices


def cycle(length: float, vertices: int = 3) -> MetricGraph:
    """A single loop of total ``length`` through ``vertices`` equally spaced vertices."""
    if vertices < 1:
        raise ValueError("a cycle needs at least one vertex")
    _check_lengths([length])
    piece = length / vertices
    edges = [Edge(f"e{i}", f"v{i}", f"v{(i + 1) % vertices}", piece) for i in range(vertices)]
    return MetricGraph(tuple(f"v{i}" for i in range(vertices)), tuple(edges))


def wedge(*lengths: float) -> MetricGraph:
    """Self-loops of the given lengths glued at a single vertex ``o``."""
    if not lengths:
        raise ValueError("a wedge needs at least one petal")
    _check_lengths(lengths)
    return MetricGraph(("o",), tuple(Edge(f"p{i}", "o", "o", float(L)) for i, L in enumerate(lengths)))


def theta(a: float, b: float, c: float) -> MetricGraph:
    """Junctions ``u`` and ``v`` joined by three parallel edges."""
    _check_lengths([a, b, c])
    return MetricGraph(("u", "v"), tuple(Edge(f"t{i}", "u", "v", float(L)) for i, L in enumerate((a, b, c))))


def complete(n: int, length: float = 1.0) -> MetricGraph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    _check_lengths([length])
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append(Edge(f"e{i}_{j}", f"v{i}", f"v{j}", float(length)))
    return MetricGraph(tuple(f"v{i}" for i in range(n)), tuple(edges))


def random_graph(n: int, m: int, seed: int, low: float = 0.5, high: float = 2.0) -> MetricGraph:
    """Connected simple graph: a random recursive tree plus ``m - n + 1`` extra edges.

    Lengths are uniform on ``[low, high)``.
    """
    if n < 1 or not n - 1 <= m <= n * (n - 1) // 2:
        raise ValueError(f"need n >= 1 and n-1 <= m <= n(n-1)/2, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    pairs = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    used = set(pairs)
    spare = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in used]
    extra = rng.choice(len(spare), size=m - (n - 1), replace=False) if m > n - 1 else []
    pairs += [spare[int(k)] for k in sorted(extra)]
    lengths = rng.uniform(low, high, size=m)
    edges = [Edge(f"e{k}", f"v{i}", f"v{j}", float(L)) for k, ((i, j), L) in enumerate(zip(pairs, lengths))]
    return MetricGraph(tuple(f"v{i}" for i in range(n)), tuple(edges))


def random_tree(n: int, seed: int) -> MetricGraph:
    return random_graph(n, n - 1, seed)


def _check_lengths(lengths) -> None:
    for L in lengths:
        if not float(L) > 0:
            raise ValueError(f"lengths must be positive, got {L}")


def generate(spec: GeneratorSpec) -> MetricGraph:
    p = spec.params
    f = spec.family
    if f == "cycle":
        if len(p) != 1:
            raise ValueError("cycle takes one length")
        return cycle(p[0], 3 if spec.vertices is None else spec.vertices)
    if f == "wedge":
        return wedge(*p)
    if f == "theta":
        if len(p) != 3:
            raise ValueError("theta takes three lengths")
        return theta(*p)
    if f == "complete":
        if len(p) not in (1, 2) or p[0] != int(p[0]):
            raise ValueError("complete takes n and an optional edge length")
        return complete(int(p[0]), *p[1:])
    if f == "random":
        if len(p) != 2 or any(x != int(x) for x in p):
            raise ValueError("random takes integer n and m")
        return random_graph(int(p[0]), int(p[1]), spec.seed)
    if f == "tree":
        if len(p) != 1 or p[0] != int(p[0]):
            raise ValueError("tree takes integer n")
        return random_tree(int(p[0]), spec.seed)
    raise ValueError(f"unknown family {f!r}; expected one of {', '.join(FAMILIES)}")
