import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphcech.generators import cycle, random_graph, random_tree, theta, wedge
from graphcech.metric_graph import (
    GraphFormatError,
    GraphPoint,
    MetricGraph,
    all_pairs_distances,
    delta_discretize,
    floyd_warshall,
    from_json,
    genus,
    load,
    normalize,
    point_distance,
    save,
)
from oracles import dense_distances


def write(tmp_path, obj, name="g.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def test_load_minimal(tmp_path):
    g = load(write(tmp_path, {"vertices": ["a", "b"], "edges": [["e1", "a", "b", 1.0]]}))
    assert g.vertices == ("a", "b")
    assert g.edges[0].id == "e1" and g.edges[0].length == 1.0
    assert genus(g) == 0


@pytest.mark.parametrize(
    "edges, message",
    [
        ([["e1", "a", "b", 0]], "nonpositive length"),
        ([["e1", "a", "b", -1.5]], "nonpositive length"),
        ([["e1", "a", "c", 1.0]], "dangling endpoint"),
        ([["e1", "a", "b", 1.0], ["e1", "b", "a", 2.0]], "duplicate edge id"),
        ([["e1", "a", "b"]], "edge record"),
        ([["e1", "a", "b", "1.0"]], "must be a number"),
    ],
)
def test_load_rejects(tmp_path, edges, message):
    path = write(tmp_path, {"vertices": ["a", "b"], "edges": edges})
    with pytest.raises(GraphFormatError, match=message) as info:
        load(path)
    assert "e1" in str(info.value)


def test_load_rejects_nan_and_duplicate_vertex(tmp_path):
    path = tmp_path / "nan.json"
    path.write_text('{"vertices": ["a", "b"], "edges": [["e1", "a", "b", NaN]]}')
    with pytest.raises(GraphFormatError, match="non-finite"):
        load(path)
    with pytest.raises(GraphFormatError, match="duplicate vertex"):
        from_json({"vertices": ["a", "a"], "edges": []})


def test_load_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(GraphFormatError, match="parse error"):
        load(p)


def test_figure_two_style_graph_with_self_loop(tmp_path):
    # 5 vertices, 6 edges, one of them a self-loop
    obj = {
        "vertices": ["a", "b", "c", "d", "e"],
        "edges": [["1", "a", "b", 1.0], ["2", "b", "c", 1.5], ["3", "c", "a", 2.0],
                  ["4", "c", "d", 1.0], ["5", "d", "e", 0.5], ["6", "e", "e", 3.0]],
    }
    g = load(write(tmp_path, obj))
    assert len(g.vertices) == 5 and len(g.edges) == 6
    assert any(e.u == e.v for e in g.edges)
    assert genus(g) == 2


def test_save_load_roundtrip(tmp_path):
    g = random_graph(8, 11, seed=3)
    save(g, tmp_path / "r.json")
    assert load(tmp_path / "r.json") == g


def test_normalize_self_loop():
    g = MetricGraph.from_edges([("s", "v", "v", 6.0)])
    h = normalize(g)
    assert len(h.edges) == 3 and len(h.vertices) == 3
    assert [e.length for e in h.edges] == [2.0, 2.0, 2.0]
    assert h.is_simple()
    assert h.provenance == {"s": ("s:0", "s:1", "s:2")}
    walk = [(e.u, e.v) for e in h.edges]
    assert walk[0][0] == "v" and walk[-1][1] == "v"


def test_normalize_parallel_edges():
    g = MetricGraph.from_edges([("p", "u", "v", 2.0), ("q", "u", "v", 4.0)])
    h = normalize(g)
    assert sorted(e.length for e in h.edges) == [1.0, 1.0, 2.0, 2.0]
    assert h.provenance["p"] == ("p:0", "p:1") and h.provenance["q"] == ("q:0", "q:1")
    assert h.is_simple()


def test_normalize_identity_on_simple():
    g = random_graph(6, 8, seed=0)
    assert normalize(g) is g


@pytest.mark.parametrize("g", [wedge(3.0, 5.0), theta(1.0, 2.0, 3.0), cycle(7.0, 1), cycle(4.0, 2)])
def test_normalize_preserves_genus_length_distances(g):
    h = normalize(g)
    assert genus(h) == genus(g)
    assert h.total_length == pytest.approx(g.total_length, rel=1e-15)
    Dg = floyd_warshall(g)
    Dh = all_pairs_distances(h).dist
    idx = [h.vertex_index[v] for v in g.vertices]
    assert np.allclose(Dh[np.ix_(idx, idx)], Dg, rtol=1e-12)


def test_genus_examples():
    tri = MetricGraph.from_edges([("a", "x", "y", 1), ("b", "y", "z", 1), ("c", "z", "x", 1)])
    assert genus(tri) == 1
    from graphcech.generators import complete
    assert genus(complete(4)) == 3
    for seed in range(5):
        assert genus(random_tree(12, seed)) == 0


def test_distance_examples():
    c = cycle(12.0, 4)
    o = all_pairs_distances(c)
    assert o("v0", "v2") == 6.0
    t = theta(1.0, 2.0, 3.0)
    assert all_pairs_distances(normalize(t))("u", "v") == 1.0
    two = MetricGraph.from_edges([("a", "x", "y", 1.0), ("b", "z", "w", 1.0)])
    assert all_pairs_distances(two)("x", "z") == math.inf


def test_dijkstra_matches_floyd_warshall():
    for seed in range(10):
        g = random_graph(30, 45, seed)
        D = all_pairs_distances(g).dist
        assert np.allclose(D, floyd_warshall(g), rtol=1e-9, atol=0)
        assert np.allclose(D, dense_distances(g), rtol=1e-9, atol=0)


def test_shortest_path_reconstruction_has_oracle_length():
    g = random_graph(15, 22, seed=4)
    o = all_pairs_distances(g)
    for s in range(0, 15, 3):
        for t in range(15):
            length = sum(g.edges[k].length for k in o.path_edges(s, t))
            assert length == pytest.approx(o.dist[s, t], rel=1e-12)
            verts = o.path_vertices(s, t)
            assert verts[0] == s and verts[-1] == t


def test_dijkstra_tie_break_smallest_edge_id():
    # two equal routes a->d: via b (edges "a1","b1") or via c (edges "a0","b0")
    g = MetricGraph.from_edges([("a1", "a", "b", 1), ("b1", "b", "d", 1),
                                ("a0", "a", "c", 1), ("b0", "c", "d", 1)])
    o = all_pairs_distances(g)
    s, t = g.vertex_index["a"], g.vertex_index["d"]
    assert g.edges[o.pred_edge[s, t]].id == "b0"


@pytest.mark.parametrize("seed", range(6))
def test_metric_axioms_exhaustive(seed):
    g = random_graph(50, 50 + 3 * seed, seed)
    D = all_pairs_distances(g).dist
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0)
    off = D[~np.eye(len(D), dtype=bool)]
    assert np.all(off > 0)
    # slack[i, k, j] = D[i,k] + D[k,j] - D[i,j]
    slack = D[:, :, None] + D[None, :, :] - D[:, None, :]
    assert slack.min() >= -1e-12 * D.max()


def test_point_distance():
    seg = MetricGraph.from_edges([("e", "u", "v", 5.0)])
    o = all_pairs_distances(seg)
    assert point_distance(seg, o, GraphPoint("e", 1.0), GraphPoint("e", 4.0)) == 3.0
    c = cycle(12.0, 4)  # edges e0..e3 of length 3, e_i from v_i to v_{i+1}
    o = all_pairs_distances(c)
    # arc positions 0 and 7: v0 and 1 unit into e2
    assert point_distance(c, o, GraphPoint("e0", 0.0), GraphPoint("e2", 1.0)) == 5.0
    # offset 0 is the u endpoint
    q = GraphPoint("e2", 1.5)
    expected = min(o("v0", "v2") + 1.5, o("v0", "v3") + 1.5)
    assert point_distance(c, o, GraphPoint("e0", 0.0), q) == expected
    with pytest.raises(ValueError):
        point_distance(c, o, GraphPoint("e0", 3.5), q)


def test_point_distance_matches_arc_enumeration():
    c = cycle(12.0, 4)
    o = all_pairs_distances(c)
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b = rng.uniform(0, 12, size=2)
        pa = GraphPoint(f"e{int(a // 3)}", a - 3 * (a // 3))
        pb = GraphPoint(f"e{int(b // 3)}", b - 3 * (b // 3))
        arc = abs(a - b)
        assert point_distance(c, o, pa, pb) == pytest.approx(min(arc, 12 - arc), abs=1e-12)


def test_discretize_examples():
    seg = MetricGraph.from_edges([("e", "u", "v", 2.5)])
    d = delta_discretize(seg, 1.0)
    assert len(d.graph.edges) == 3
    assert all(e.length == 2.5 / 3 for e in d.graph.edges)
    one = MetricGraph.from_edges([("e", "u", "v", 1.0)])
    assert delta_discretize(one, 1.0).graph == one
    d = delta_discretize(cycle(12.0, 4), 0.15)
    assert len(d.graph.edges) == 80
    assert math.fsum(e.length for e in d.graph.edges) == 12.0


def test_discretize_exact_quotient_not_overcounted():
    # 3 / 0.15 evaluates to 20.000000000000004 in binary floating point
    seg = MetricGraph.from_edges([("e", "u", "v", 3.0)])
    assert len(delta_discretize(seg, 0.15).graph.edges) == 20
    assert len(delta_discretize(cycle(12.0, 4), 0.15).graph.vertices) == 80


lengths = st.lists(st.floats(0.05, 5.0), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(lengths=lengths, delta=st.floats(0.05, 3.0))
def test_discretize_invariants(lengths, delta):
    n = len(lengths)
    g = MetricGraph.from_edges([(f"e{i}", f"v{i}", f"v{(i + 1) % (n + 1)}", L) for i, L in enumerate(lengths)]
                               + [("x", f"v{n}", "v0", 1.0)])
    d = delta_discretize(g, delta)
    assert genus(d.graph) == genus(g)
    assert set(g.vertices) <= set(d.graph.vertices)
    for e in g.edges:
        pieces = [d.graph.edge(k).length for k in d.provenance[e.id]]
        assert max(pieces) <= delta
        assert abs(math.fsum(pieces) - e.length) <= 8 * math.ulp(e.length)
    D0 = all_pairs_distances(g).dist
    D1 = all_pairs_distances(d.graph).dist
    idx = [d.graph.vertex_index[v] for v in g.vertices]
    assert np.allclose(D1[np.ix_(idx, idx)], D0, rtol=1e-12, atol=0)
