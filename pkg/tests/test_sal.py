import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from salmine.sal import (InvalidInputError, NGraph, NotAPathError, aggregate_near,
                         best_neighbors, classify_transitive, filter_ngraph,
                         redescribe_curves, symmetric_closure, transpose_ngraph)

from oracles import brute_near, components


def graph(n, edges):
    return NGraph(np.arange(n, dtype=float)[:, None], np.array(edges, dtype=np.int64).reshape(-1, 2))


def test_aggregate_near_collinear():
    g = aggregate_near([[0.0], [1.0], [2.0]], 1.5)
    assert g.edge_set() == {(0, 1), (1, 0), (1, 2), (2, 1)}


def test_aggregate_near_single_point():
    assert len(aggregate_near([[0.3, 0.1]], 10.0).edges) == 0


def test_aggregate_near_unit_square_is_8_adjacency():
    g = aggregate_near([[0, 0], [1, 0], [0, 1], [1, 1]], 1.5)
    assert len(g.edge_set()) == 12


def test_aggregate_near_rejects_nan():
    with pytest.raises(InvalidInputError):
        aggregate_near([[0.0, np.nan], [1.0, 0.0]], 1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=25, unique=True),
       st.floats(0.5, 4.0))
def test_aggregate_near_matches_brute_force(pts, radius):
    g = aggregate_near(np.array(pts, dtype=float), radius)
    assert g.edge_set() == brute_near(pts, radius)
    assert all((b, a) in g.edge_set() for a, b in g.edge_set())


def test_filter_ngraph_cases():
    g = graph(3, [(0, 1), (1, 2)])
    assert filter_ngraph(g, lambda e: np.ones(len(e), bool)).edge_set() == g.edge_set()
    empty = filter_ngraph(g, lambda e: np.zeros(len(e), bool))
    assert empty.n_nodes == 3 and len(empty.edges) == 0
    assert filter_ngraph(g, lambda e: e[:, 1] > 1).edge_set() == {(1, 2)}


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)).filter(lambda t: t[0] != t[1]), max_size=30),
       st.integers(0, 7), st.integers(0, 7))
def test_filter_composition(edges, a, b):
    g = graph(8, sorted(edges))
    p = lambda e: e[:, 0] != a
    q = lambda e: e[:, 1] != b
    twice = filter_ngraph(filter_ngraph(g, p), q)
    once = filter_ngraph(g, lambda e: p(e) & q(e))
    assert twice.edge_set() == once.edge_set()


def test_best_neighbors_argmax_and_ties():
    g = graph(3, [(0, 1), (0, 2)])
    metric = {(0, 1): 0.9, (0, 2): 0.5}
    kept = best_neighbors(g, lambda e: np.array([metric[tuple(x)] for x in e]))
    assert kept.edge_set() == {(0, 1)}
    tied = best_neighbors(g, lambda e: np.ones(len(e)))
    assert tied.edge_set() == {(0, 1)}
    assert len(best_neighbors(graph(3, []), lambda e: np.ones(len(e))).edges) == 0


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda t: t[0] != t[1]), max_size=40),
       st.integers(0, 2 ** 32 - 1))
def test_best_neighbors_out_degree_at_most_one(edges, seed):
    g = graph(10, sorted(edges))
    w = np.random.default_rng(seed).integers(0, 3, size=len(g.edges)).astype(float)
    kept = best_neighbors(g, lambda e: w)
    assert np.all(kept.out_degree() <= 1)
    for node in range(10):
        out = [k for k, (a, _) in enumerate(g.edges) if a == node]
        if out:
            best = max(w[k] for k in out)
            want = min(g.edges[k][1] for k in out if w[k] == best)
            assert (node, want) in kept.edge_set()


def test_transpose_and_closure():
    assert transpose_ngraph(graph(2, [(0, 1)])).edge_set() == {(1, 0)}
    chain = graph(3, [(0, 1), (1, 2)])
    assert transpose_ngraph(chain).edge_set() == {(1, 0), (2, 1)}
    sym = graph(2, [(0, 1), (1, 0)])
    assert transpose_ngraph(sym).edge_set() == sym.edge_set()
    assert symmetric_closure(graph(2, [(0, 1)])).edge_set() == {(0, 1), (1, 0)}
    assert symmetric_closure(sym).edge_set() == sym.edge_set()
    assert symmetric_closure(graph(3, [(0, 1), (2, 1)])).edge_set() == {(0, 1), (1, 0), (1, 2), (2, 1)}


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda t: t[0] != t[1]), max_size=40))
def test_transpose_is_involution(edges):
    g = graph(10, sorted(edges))
    assert transpose_ngraph(transpose_ngraph(g)).edge_set() == g.edge_set()


def test_classify_examples():
    classes = classify_transitive(graph(4, [(0, 1), (1, 0), (1, 2), (2, 1)])).classes
    assert sorted(map(sorted, classes)) == [[0, 1, 2], [3]]
    assert len(classify_transitive(graph(5, [])).classes) == 5
    assert len(classify_transitive(graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])).classes) == 2


def test_classify_matches_union_find_on_1000_graphs():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(1, 21))
        m = int(rng.integers(0, 2 * n + 1))
        e = rng.integers(0, n, size=(m, 2))
        e = e[e[:, 0] != e[:, 1]]
        got = sorted(sorted(c) for c in classify_transitive(graph(n, e)).classes)
        assert got == components(n, e)


def test_redescribe_path_singleton_and_cycle():
    pts = np.array([[0.0], [1.0], [2.0], [5.0]])
    g = NGraph(pts, np.array([(0, 1), (1, 0), (1, 2), (2, 1)]))
    curves = redescribe_curves(classify_transitive(g), g)
    assert [c.indices for c in curves] in ([(0, 1, 2), (3,)], [(2, 1, 0), (3,)])
    assert curves[1].vertices.shape == (1, 1)
    tri = graph(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(NotAPathError):
        redescribe_curves(classify_transitive(tri), tri)
    star = graph(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(NotAPathError):
        redescribe_curves(classify_transitive(star), star)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=5))
def test_redescribe_preserves_nodes(lengths):
    edges, start = [], 0
    for L in lengths:
        edges += [(start + i, start + i + 1) for i in range(L - 1)]
        start += L
    g = symmetric_closure(graph(start, edges))
    curves = redescribe_curves(classify_transitive(g), g)
    assert sorted(i for c in curves for i in c.indices) == list(range(start))
    assert sorted(len(c) for c in curves) == sorted(lengths)
