from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immlab.errors import EmptySide, LoopForbidden, MissingEdge, ParseError, SimpleOnly
from immlab.multigraph import (
    MultiGraph,
    canonical_hash,
    complete_graph,
    cycle_graph,
    delete_edges,
    edge_cut,
    edge_cut_size,
    from_edgelist,
    from_graph6,
    lift,
    path_graph,
    to_dot,
    to_edgelist,
    to_graph6,
)


@st.composite
def multigraphs(draw, max_n=8, max_m=3):
    n = draw(st.integers(2, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=14))
    edges = {}
    for p in chosen:
        edges[p] = min(max_m, edges.get(p, 0) + 1)
    return MultiGraph(n, edges)


def recomputed_degrees(g):
    deg = [0] * g.n
    for u, v, m in g.edges():
        deg[u] += m
        deg[v] += m
    return deg


def test_constructor_canonicalises_pairs():
    g = MultiGraph(3, [(2, 0), (0, 2), (1, 2, 3)])
    assert g.multiplicities() == {(0, 2): 2, (1, 2): 3}
    assert g.degree(2) == 5
    assert g.edge_count() == 5
    assert g.pair_count() == 2
    assert not g.is_simple()


def test_constructor_rejects_loops_and_bad_vertices():
    with pytest.raises(LoopForbidden):
        MultiGraph(2, [(1, 1)])
    with pytest.raises(ValueError):
        MultiGraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        MultiGraph(-1)


@pytest.mark.parametrize("n, edges", [(1, 0), (9, 36), (12, 66)])
def test_complete_graph_sizes(n, edges):
    g = complete_graph(n)
    assert g.edge_count() == edges
    assert set(g.degrees()) == {n - 1}


def test_delete_three_paths_from_k9():
    g = delete_edges(complete_graph(9), [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)])
    assert sorted(g.degrees()) == [6, 6, 6, 7, 7, 7, 7, 7, 7]
    assert [v for v in g.vertices() if g.degree(v) == 6] == [1, 4, 7]


def test_delete_edges_small_cases():
    g = delete_edges(complete_graph(3), [(0, 2)])
    assert g == path_graph(3)
    with pytest.raises(MissingEdge):
        delete_edges(g, [(0, 2)])
    double = MultiGraph(2, [(0, 1, 2)])
    assert delete_edges(double, [(0, 1), (1, 0)]).edge_count() == 0
    with pytest.raises(MissingEdge):
        delete_edges(double, [(0, 1)] * 3)


def test_lift_path_and_triangle():
    g = lift(path_graph(3), 0, 1, 2)
    assert g.multiplicities() == {(0, 2): 1}
    assert g.degree(1) == 0
    tri = lift(complete_graph(3), 0, 1, 2)
    assert tri.multiplicities() == {(0, 2): 2}
    assert tri.degree(1) == 0


def test_lift_errors():
    with pytest.raises(LoopForbidden):
        lift(path_graph(3), 0, 1, 0)
    with pytest.raises(MissingEdge):
        lift(path_graph(3), 0, 2, 1)


def test_edge_cut_examples():
    assert edge_cut_size(complete_graph(4), [0]) == 3
    cut = edge_cut(cycle_graph(6), [0, 1, 2])
    assert cut.size == 2 and cut.side == frozenset({0, 1, 2})
    for side in ([], range(4), [7]):
        with pytest.raises(EmptySide):
            edge_cut_size(complete_graph(4), side)


def test_subgraph_relabels_in_order():
    g = MultiGraph(5, [(1, 3, 2), (3, 4), (0, 1)], {3: "x"})
    h = g.subgraph([4, 3, 1])
    assert h.multiplicities() == {(0, 1): 2, (1, 2): 1}
    assert h.labels == {1: "x"}


def test_graph6_rejects_multigraphs():
    with pytest.raises(SimpleOnly):
        to_graph6(MultiGraph(2, [(0, 1, 2)]))
    with pytest.raises(ParseError):
        from_graph6("\x01\x02")


def test_edgelist_format_is_canonical():
    g = MultiGraph(4, [(3, 1), (0, 2, 2)], {1: "a^1_1"})
    assert to_edgelist(g) == "mgraph 4 2\n0 2 2\n1 3 1\nlabel 1 a^1_1\n"
    assert from_edgelist(to_edgelist(g)) == g
    assert from_edgelist(to_edgelist(g)).labels == {1: "a^1_1"}


@pytest.mark.parametrize(
    "text",
    ["", "graph 2 1\n0 1 1\n", "mgraph 2 2\n0 1 1\n", "mgraph 2 1\n1 0 1\n", "mgraph 2 1\n0 1 0\n", "mgraph 2 1\n0 5 1\n"],
)
def test_edgelist_parse_errors(text):
    with pytest.raises(ParseError):
        from_edgelist(text)


def test_dot_repeats_parallel_edges():
    dot = to_dot(MultiGraph(2, [(0, 1, 3)]))
    assert dot.count("0 -- 1") == 3


@settings(max_examples=60, deadline=None)
@given(multigraphs())
def test_degree_matches_recount(g):
    assert g.degrees() == recomputed_degrees(g)
    assert sum(g.degrees()) == 2 * g.edge_count()


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.data())
def test_lift_changes_only_middle_degree(g, data):
    triples = [
        (u, v, w)
        for v in g.vertices()
        for u in g.neighbors(v)
        for w in g.neighbors(v)
        if u != w
    ]
    if not triples:
        return
    u, v, w = data.draw(st.sampled_from(triples))
    h = lift(g, u, v, w)
    assert sum(h.degrees()) == sum(g.degrees()) - 2
    for x in g.vertices():
        assert h.degree(x) == g.degree(x) - (2 if x == v else 0)
    assert h.multiplicity(u, w) == g.multiplicity(u, w) + 1
    assert h.degrees() == recomputed_degrees(h)


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.data())
def test_delete_then_readd_is_identity(g, data):
    instances = [(u, v) for u, v, m in g.edges() for _ in range(m)]
    chosen = data.draw(st.lists(st.sampled_from(instances), unique=False, max_size=len(instances))) if instances else []
    # keep the multiset within what is available
    budget = g.multiplicities()
    pairs = []
    for p in chosen:
        if budget.get(p, 0) > 0:
            budget[p] -= 1
            pairs.append(p)
    assert delete_edges(g, pairs).add_edges(pairs) == g


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.data())
def test_cut_is_symmetric_and_matches_recount(g, data):
    side = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=g.n - 1))
    rest = set(range(g.n)) - side
    size = edge_cut_size(g, side)
    assert size == edge_cut_size(g, rest)
    assert size == sum(
        g.multiplicity(u, v) for u in side for v in rest
    )


@settings(max_examples=60, deadline=None)
@given(multigraphs())
def test_edgelist_round_trip(g):
    h = from_edgelist(to_edgelist(g))
    assert h == g
    assert canonical_hash(h) == canonical_hash(g)


@settings(max_examples=60, deadline=None)
@given(multigraphs(max_m=1))
def test_graph6_round_trip(g):
    assert from_graph6(to_graph6(g)) == g


@settings(max_examples=40, deadline=None)
@given(multigraphs())
def test_networkx_round_trip(g):
    assert MultiGraph.from_networkx(g.to_networkx()) == g
    assert MultiGraph.from_networkx(g.to_networkx(multigraph=True)) == g
