import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immlab.immersion.bruteforce import brute_force_paths
from immlab.immersion.routing import NodeCounter, OutOfBudget, RouteOptions, edge_disjoint_paths
from immlab.multigraph import MultiGraph, canon, complete_graph, cycle_graph


def assert_edge_disjoint(g, demands, paths):
    used = {}
    for key, (a, b) in demands.items():
        p = paths[key]
        assert {p[0], p[-1]} == {a, b}
        assert len(set(p)) == len(p)
        for x, y in zip(p, p[1:]):
            e = canon(x, y)
            used[e] = used.get(e, 0) + 1
    for e, count in used.items():
        assert count <= g.multiplicity(*e)


def test_cycle_has_two_routes_between_any_pair():
    g = cycle_graph(6)
    demands = {"a": (0, 3), "b": (0, 3)}
    paths = edge_disjoint_paths(g, demands, NodeCounter(10_000))
    assert_edge_disjoint(g, demands, paths)
    assert edge_disjoint_paths(g, {**demands, "c": (1, 4)}, NodeCounter(10_000)) is None


def test_parallel_edges_carry_separate_demands():
    g = MultiGraph(2, [(0, 1, 3)])
    demands = {i: (0, 1) for i in range(3)}
    assert edge_disjoint_paths(g, demands, NodeCounter(1000)) is not None
    assert edge_disjoint_paths(g, {i: (0, 1) for i in range(4)}, NodeCounter(1000)) is None


def test_budget_is_enforced():
    g = complete_graph(8)
    demands = {(i, j): (i, j) for i in range(7) for j in range(i + 1, 7)}
    with pytest.raises(OutOfBudget):
        edge_disjoint_paths(
            g.delete_edges([(0, 1)]), demands, NodeCounter(0), RouteOptions(False, False, False, False, False)
        )


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_single_pair_demands_match_max_flow(seed):
    rng = random.Random(seed)
    h = nx.gnp_random_graph(7, 0.45, seed=seed)
    g = MultiGraph.from_networkx(h)
    s, t = rng.sample(range(7), 2)
    flow = nx.maximum_flow_value(g.to_networkx(), s, t, capacity="capacity") if g.edge_count() else 0
    for k in (flow, flow + 1):
        if k == 0:
            continue
        demands = {i: (s, t) for i in range(k)}
        paths = edge_disjoint_paths(g, demands, NodeCounter(10**6))
        assert (paths is not None) == (k <= flow)
        if paths:
            assert_edge_disjoint(g, demands, paths)


@pytest.mark.parametrize(
    "opts",
    [RouteOptions(), RouteOptions(flow_check=False), RouteOptions(False, False, False, False, False)],
)
def test_corner_demands_agree_with_brute_force(corpus, opts):
    rng = random.Random(11)
    for g in rng.sample(corpus, 200):
        if g.n < 4:
            continue
        corners = tuple(sorted(rng.sample(range(g.n), 4)))
        demands = {
            (i, j): (corners[i], corners[j]) for i in range(4) for j in range(i + 1, 4)
        }
        mine = edge_disjoint_paths(g, demands, NodeCounter(10**6), opts)
        assert (mine is not None) == (brute_force_paths(g, corners) is not None)
        if mine:
            assert_edge_disjoint(g, demands, mine)


def test_flow_check_prunes_at_the_root():
    # two triangles joined by one edge: corner 5 cannot send two paths across
    g = MultiGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    demands = {"a": (0, 5), "b": (1, 5)}
    with_flow = NodeCounter(10**6)
    assert edge_disjoint_paths(g, demands, with_flow) is None
    without = NodeCounter(10**6)
    assert edge_disjoint_paths(g, demands, without, RouteOptions(flow_check=False)) is None
    assert with_flow.nodes == 1 < without.nodes
