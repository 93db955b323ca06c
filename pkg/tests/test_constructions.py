import math

import pytest

from immlab.constructions import (
    ConstructionParams,
    LabeledGraph,
    attach_pods,
    build_dock,
    build_family,
    build_pod,
    devos_graph,
    is_class_two,
)
from immlab.errors import CrossBayAttachment, InfeasibleParams, NotFull
from immlab.immersion.pods import find_gadgets
from immlab.metrics import degree_histogram, edge_connectivity, min_degree
from immlab.multigraph import MultiGraph, canonical_hash, cycle_graph, edge_cut_size
from immlab.immersion.refute import refute_dock_graph


def hist(g):
    return degree_histogram(g)


def test_p8_histogram():
    assert hist(build_pod(ConstructionParams("P8")).graph) == {6: 3, 7: 6}
    assert hist(build_pod(ConstructionParams("Pd", d=8)).graph) == {6: 3, 7: 6}


def test_pd_odd_has_one_degree_d_vertex():
    assert hist(build_pod(ConstructionParams("Pd", d=9)).graph) == {7: 3, 8: 6, 9: 1}


def test_pkd_odd_k_gadgets():
    lg = build_pod(ConstructionParams("Pkd", d=9, k=7))
    g = lg.graph
    A = [v for v in g.vertices() if g.degree(v) == 7]
    assert len(A) == 7
    assert sorted(lg.attach[0]) == A
    _, packing = find_gadgets(g, 9)
    kinds = sorted(x.kind for x in packing)
    assert kinds.count("odd-cycle-in-A") == 2
    assert kinds.count("path2-B-A-B") == 1


def test_special_pod_profile():
    lg = build_pod(ConstructionParams("Special10Pod", d=10))
    g = lg.graph
    assert g.n == 11
    assert hist(g) == {8: 7, 9: 4}
    attach = lg.attach[0]
    assert len(attach) == 8
    low = [v for v in g.vertices() if g.degree(v) == 8]
    (w,) = set(attach) - set(low)
    assert g.degree(w) == 9


def test_pod_params_validation():
    with pytest.raises(InfeasibleParams):
        ConstructionParams("Pd", d=7)
    with pytest.raises(InfeasibleParams):
        ConstructionParams("Pkd", d=9, k=8)
    with pytest.raises(InfeasibleParams):
        ConstructionParams("Pkd", d=9)
    with pytest.raises(InfeasibleParams):
        build_pod(ConstructionParams("Pkd", d=10, k=8))
    with pytest.raises(InfeasibleParams):
        ConstructionParams("Nope")


def test_dock_g4_9():
    dock = build_dock(9, 4, 7)
    g = dock.graph
    assert g.n == 28
    bays = dock.bays
    for i in range(4):
        nxt = set(bays[(i + 1) % 4])
        assert sum(g.multiplicity(u, v) for u in bays[i] for v in nxt) == 4
        assert sum(g.multiplicity(u, v) for u in bays[i] for v in bays[(i + 2) % 4]) == 0


def test_dock_wiring_law():
    for d in (8, 9, 10, 11):
        dock = build_dock(d, 3, d - 2)
        g = dock.graph
        coord = {c: v for v, c in dock.bay_coordinate.items()}
        expected = set()
        for i in range(3):
            for j in range(1, math.ceil((d - 2) / 2) + 1):
                u, v = coord[(i, j)], coord[((i - 1) % 3, d - 1 - j)]
                expected.add((min(u, v), max(u, v)))
        inter = {(u, v) for u, v, _ in g.edges() if dock.bay_of[u] != dock.bay_of[v]}
        assert inter == expected


def test_single_bay_dock_is_bare_clique():
    g = build_dock(8, 1, 5).graph
    assert g.edge_count() == 10 and set(g.degrees()) == {4}
    with pytest.raises(InfeasibleParams):
        build_dock(8, 1, 7)


def test_g8_minimal_attachment():
    lg = build_family(ConstructionParams("Gd", d=8))
    assert lg.graph.n == 5 + 5 * 9
    assert len(lg.pods) == 5
    assert min_degree(lg.graph) == 7


def test_one_pod_is_not_enough():
    dock = build_dock(8, 1, 5)
    pod = build_pod(ConstructionParams("Pd", d=8))
    with pytest.raises(NotFull) as info:
        attach_pods(dock, [pod], [[0, 1, 2]])
    assert info.value.deficient == [0, 1, 2, 3, 4]


def test_cross_bay_attachment_rejected():
    dock = build_dock(9, 2, 7)
    pod = build_pod(ConstructionParams("Pd", d=9))
    with pytest.raises(CrossBayAttachment):
        attach_pods(dock, [pod], [[0, 1, 7]])


def g4_9_figure_map():
    """Three pods per bay, hitting a1 a2 a3 / a3 a4 a5 / a5 a6 a7."""
    out = {}
    for i in range(4):
        base = 7 * i
        for p, js in enumerate([(1, 2, 3), (3, 4, 5), (5, 6, 7)]):
            out[str(3 * i + p)] = [base + j - 1 for j in js]
    return out


def test_g4_9_figure_layout():
    lg = build_family(
        ConstructionParams("Gnd", d=9, n_bays=4, attachment="explicit", explicit=g4_9_figure_map())
    )
    g = lg.graph
    assert len(lg.pods) == 12
    for v, (i, j) in lg.bay_coordinate.items():
        assert g.degree(v) == (9 if j in (3, 4, 5) else 8)
    assert min_degree(g) == 8
    assert edge_connectivity(g) == 3
    assert refute_dock_graph(g, lg.decomposition(), 9).refuted


@pytest.mark.parametrize(
    "params, size",
    [
        (ConstructionParams("Gnd", d=8, n_bays=2), 3),
        (ConstructionParams("H5d", d=8, n_bays=2), 5),
        (ConstructionParams("Mkd", d=9, k=7, n_bays=2), 7),
        (ConstructionParams("Special10Graph", d=10), 8),
    ],
)
def test_pod_out_degree_law(params, size):
    lg = build_family(params)
    for idx, members in enumerate(lg.pods):
        assert edge_cut_size(lg.graph, members) == size
        assert len(lg.attach[idx]) == size
        assert lg.pod_bay(idx) is not None


def test_round_robin_fills_bays():
    lg = build_family(ConstructionParams("Gnd", d=9, n_bays=2, attachment="round_robin"))
    assert min_degree(lg.graph) == 8
    # every dock vertex misses one edge: 7 slots per bay, three pods of 3
    assert len(lg.pods) == 6
    assert all(lg.pod_bay(i) == i // 3 for i in range(6))


def test_special_graph_is_8_edge_connected():
    lg = build_family(ConstructionParams("Special10Graph", d=10))
    assert lg.graph.n == 8 + 2 * 11
    assert min_degree(lg.graph) == 9
    assert edge_connectivity(lg.graph) == 8


def test_mkd_connectivity():
    g = build_family(ConstructionParams("Mkd", d=9, k=7, n_bays=2)).graph
    assert min_degree(g) == 8
    assert edge_connectivity(g) == 7


def test_seymour_is_devos_with_four_triangles():
    s = build_family(ConstructionParams("Seymour10", d=10)).graph
    dv = build_family(ConstructionParams("DevosFamily", devos_cycles=[3, 3, 3, 3])).graph
    assert canonical_hash(s) == canonical_hash(dv)
    assert s.n == 12 and min_degree(s) == 12 - 1 - 2


def test_devos_validation():
    with pytest.raises(InfeasibleParams):
        build_family(ConstructionParams("DevosFamily", devos_cycles=[3, 3, 3]))
    with pytest.raises(InfeasibleParams):
        build_family(ConstructionParams("DevosFamily", devos_cycles=[3, 3, 3, 4]))
    with pytest.raises(InfeasibleParams):
        devos_graph([cycle_graph(4)] * 4, 2)
    assert is_class_two(cycle_graph(5), 2)
    assert not is_class_two(cycle_graph(6), 2)


def test_metadata_round_trip():
    lg = build_family(ConstructionParams("Gnd", d=8, n_bays=2))
    back = LabeledGraph.from_metadata(lg.graph, lg.metadata())
    assert back.decomposition() == lg.decomposition()
    assert back.bay_coordinate == lg.bay_coordinate
    assert back.attach == lg.attach


def test_labels_name_bay_coordinates():
    lg = build_family(ConstructionParams("Gnd", d=8, n_bays=2))
    labels = lg.graph.labels
    assert labels[0] == "a0_1"
    assert all(labels[v].startswith("p") for v in lg.pod_of)


def test_hajos_seed_is_complete():
    g = build_family(ConstructionParams("HajosSeed", d=5)).graph
    assert g.edge_count() == 10
    assert isinstance(g, MultiGraph)
