import json
import random

import pytest

from immlab.errors import AdjacentVertices, LoopForbidden, MissingEdge
from immlab.hajos import (
    HajosOp,
    apply_alpha,
    apply_beta,
    apply_gamma,
    preservation_trial,
    random_ops,
    random_trial,
)
from immlab.immersion import IMMERSED, find_immersion, verify_certificate
from immlab.multigraph import MultiGraph, complete_graph, cycle_graph


def test_alpha_identity_and_isolated_vertex():
    k4 = complete_graph(4)
    assert apply_alpha(k4) == k4
    h = apply_alpha(k4, 1)
    assert h.n == 5 and h.degree(4) == 0 and h.subgraph(range(4)) == k4


def test_alpha_keeps_parallel_edges():
    h = apply_alpha(complete_graph(3), 0, [(0, 1)])
    assert h.multiplicity(0, 1) == 2
    with pytest.raises(LoopForbidden):
        apply_alpha(complete_graph(3), 0, [(1, 1)])


def test_beta_on_five_cycle():
    h = apply_beta(cycle_graph(5), 0, 2)
    assert h.n == 4
    assert h.is_simple()
    assert sorted(h.degrees()) == [1, 2, 2, 3]
    assert h.edge_count() == 4


def test_beta_isolated_pair_and_errors():
    assert apply_beta(MultiGraph(2), 0, 1).n == 1
    with pytest.raises(AdjacentVertices):
        apply_beta(cycle_graph(5), 0, 1)
    with pytest.raises(AdjacentVertices):
        apply_beta(cycle_graph(5), 2, 2)


def test_beta_collapses_new_parallel_classes_only():
    # 0 and 2 both see 1; after identifying them the class 0-1 would double
    g = MultiGraph(4, [(0, 1), (1, 2), (2, 3, 2)])
    h = apply_beta(g, 0, 2)
    assert h.multiplicity(0, 1) == 1
    assert h.multiplicity(0, 2) == 2


def test_gamma_on_two_triangles():
    h = apply_gamma(complete_graph(3), (0, 1), complete_graph(3), (0, 1))
    assert h.n == 5
    # x1 = 0 keeps its edge to 2 and gains the other triangle's edge x2-2
    assert h.multiplicities() == {(0, 2): 1, (0, 4): 1, (1, 2): 1, (1, 3): 1, (3, 4): 1}


def test_gamma_on_two_k4s_keeps_k4():
    h = apply_gamma(complete_graph(4), (0, 1), complete_graph(4), (2, 3))
    assert h.n == 7
    v = find_immersion(h, 4)
    assert v.outcome == IMMERSED and verify_certificate(h, v.certificate)


def test_gamma_missing_edge():
    with pytest.raises(MissingEdge):
        apply_gamma(cycle_graph(4), (0, 2), complete_graph(3), (0, 1))
    with pytest.raises(MissingEdge):
        apply_gamma(complete_graph(3), (0, 1), cycle_graph(4), (1, 3))


def test_op_round_trip():
    op = HajosOp("beta", {"u": 0, "v": 2})
    back = HajosOp(**json.loads(json.dumps(op.to_dict())))
    assert back.apply(cycle_graph(5)) == apply_beta(cycle_graph(5), 0, 2)
    with pytest.raises(ValueError):
        HajosOp("delta", {}).apply(cycle_graph(5))


def test_trial_with_pendant_then_splice():
    k5 = complete_graph(5)
    ops = [
        HajosOp("alpha", {"vertices": 1, "edges": [[0, 5]]}),
        HajosOp(
            "gamma",
            {"other": [[u, v, m] for u, v, m in k5.edges()], "n2": 5, "x1y1": [1, 2], "x2y2": [0, 1]},
        ),
    ]
    rep = preservation_trial(ops, k5, 5)
    assert rep.verdicts == [IMMERSED] * 3
    assert rep.sizes == [5, 6, 10]
    assert rep.first_flip is None
    line = json.loads(rep.to_json_line())
    assert line["flip"] is None and len(line["ops"]) == 2


def test_empty_trial():
    rep = preservation_trial([], complete_graph(4), 4)
    assert rep.verdicts == [IMMERSED]


def test_random_sequences_are_reproducible():
    a = random_ops(random.Random(9), complete_graph(5), 8, ("alpha", "beta", "gamma"))
    b = random_ops(random.Random(9), complete_graph(5), 8, ("alpha", "beta", "gamma"))
    assert a == b and len(a) == 8


def test_alpha_preservation_on_random_positives(corpus):
    rng = random.Random(17)
    positives = [(g, t) for g in corpus[::3] for t in (3, 4, 5) if find_immersion(g, t).immersed]
    for g, t in rng.sample(positives, 200):
        op = random_ops(rng, g, 1, ("alpha",))[0]
        h = op.apply(g)
        v = find_immersion(h, t)
        assert v.outcome == IMMERSED, (g, t, op)


def test_gamma_preservation_on_random_pairs(corpus):
    rng = random.Random(23)
    positives = [(g, t) for g in corpus[::3] for t in (3, 4) if find_immersion(g, t).immersed]
    for _ in range(100):
        g1, t = rng.choice(positives)
        g2 = rng.choice([g for g, s in positives if s == t])
        e1 = rng.choice([(u, v) for u, v, _ in g1.edges()])
        e2 = rng.choice([(u, v) for u, v, _ in g2.edges()])
        h = apply_gamma(g1, e1[:: rng.choice((1, -1))], g2, e2[:: rng.choice((1, -1))])
        assert find_immersion(h, t).outcome == IMMERSED


def test_mixed_trials_only_flip_at_beta():
    for seed in range(10):
        rep = random_trial(seed, k=4, length=6, kinds=("alpha", "beta", "gamma"), strict=False)
        assert rep.non_beta_flips == []
        for idx in rep.flips:
            assert rep.ops[idx].kind == "beta"
