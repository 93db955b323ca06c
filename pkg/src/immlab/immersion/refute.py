"""Structural refutation of K_d immersions in dock-and-pod graphs.

The argument has three steps.

1. Every pod is cut off by at most d - 2 edges, and x(d - x) > d - 2 for
   1 <= x <= d - 1, so the corners lie inside one pod or all in the dock.
2. Corners inside a pod: paths leaving the pod do so along its out-edges.
   Their inside ends are distinct, so the excursions act like a matching on
   the attaching vertices; the pod check (or, for a pod whose attaching set is
   not its degree d - 2 set, a search over every perfect matching) rules this
   out.
3. Corners in the dock: a bay holds at most d - 2 corners.  If some bay
   (with its pods) holds k corners with 2 <= k <= d - 2, its cut must carry
   k(d - k) paths.  Otherwise each bay holds at most one corner, needing d
   bays, and an arc of bays holding exactly two corners must carry 2(d - 2)
   paths.  Both counts are compared against the actual cut sizes.

The result is a JSON tree of ``{claim, rule, arithmetic, data, children}``
nodes; :func:`replay_refutation` re-derives every number from the graph.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from ..errors import BudgetExceeded, HypothesisViolated
from ..multigraph import MultiGraph, canonical_hash, edge_cut_size
from .pods import is_pod, maximum_matchings
from .search import IMMERSED, UNKNOWN, find_immersion


def _node(claim, rule, arithmetic="", data=None, children=None) -> dict:
    return {
        "claim": claim,
        "rule": rule,
        "arithmetic": arithmetic,
        "data": data or {},
        "children": children or [],
    }


@dataclass
class RefutationReport:
    d: int
    refuted: bool
    tree: dict
    pod_types: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "refuted": self.refuted,
            "pod_types": self.pod_types,
            "tree": self.tree,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


# -- hypotheses --------------------------------------------------------------


def _check_partition(g: MultiGraph, pods, bays) -> dict:
    seen: dict[int, str] = {}
    for kind, parts in (("pod", pods), ("bay", bays)):
        for idx, part in enumerate(parts):
            if not part:
                raise HypothesisViolated("partition", f"{kind} {idx} is empty")
            for v in part:
                if not 0 <= v < g.n:
                    raise HypothesisViolated("partition", f"vertex {v} is not in the graph")
                if v in seen:
                    raise HypothesisViolated("partition", f"vertex {v} in {seen[v]} and {kind} {idx}")
                seen[v] = f"{kind} {idx}"
    missing = [v for v in g.vertices() if v not in seen]
    if missing:
        raise HypothesisViolated("partition", f"vertices {missing[:10]} are in no pod or bay")
    return _node(
        "pods and bays partition the vertex set",
        "partition",
        f"{len(pods)} pods + {len(bays)} bays cover {g.n} vertices once",
        {"pods": [list(p) for p in pods], "bays": [list(b) for b in bays]},
    )


def _out_edges(g: MultiGraph, part) -> list[tuple[int, int]]:
    inside = set(part)
    out = []
    for v in sorted(part):
        for w, m in sorted(g.neighbors(v).items()):
            if w not in inside:
                out.extend([(v, w)] * m)
    return out


def _pod_hypotheses(g: MultiGraph, pods, bays, d: int) -> list[dict]:
    bay_of = {v: i for i, bay in enumerate(bays) for v in bay}
    nodes = []
    for idx, pod in enumerate(pods):
        out = _out_edges(g, pod)
        if len(out) > d - 2:
            raise HypothesisViolated("pod cut", f"pod {idx} has {len(out)} out-edges > d - 2 = {d - 2}")
        ends = [v for v, _ in out]
        if len(set(ends)) != len(ends):
            raise HypothesisViolated("pod attachment", f"pod {idx} has two out-edges at one vertex")
        foreign = [w for _, w in out if w not in bay_of]
        if foreign:
            raise HypothesisViolated("pod attachment", f"pod {idx} is adjacent to pod vertices {foreign}")
        touched = sorted({bay_of[w] for _, w in out})
        if len(touched) > 1:
            raise HypothesisViolated("pod attachment", f"pod {idx} touches bays {touched}")
        nodes.append(
            _node(
                f"pod {idx} is cut off by {len(out)} <= d - 2 edges",
                "cut_bound",
                f"|cut| = {len(out)} <= {d - 2}",
                {"side": sorted(pod), "cut": len(out), "bound": d - 2, "attach": ends,
                 "bay": touched[0] if touched else None},
            )
        )
    return nodes


def _dock_hypotheses(g: MultiGraph, bays, d: int) -> list[dict]:
    n = len(bays)
    nodes = []
    for i, bay in enumerate(bays):
        if len(bay) > d - 2:
            raise HypothesisViolated("bay size", f"bay {i} has {len(bay)} > d - 2 = {d - 2} vertices")
    for i in range(n):
        for j in range(i + 1, n):
            bj = set(bays[j])
            count = sum(m for v in bays[i] for w, m in g.neighbors(v).items() if w in bj)
            consecutive = n > 2 and (j == i + 1 or (i == 0 and j == n - 1)) or n == 2
            if not consecutive:
                if count:
                    raise HypothesisViolated(
                        "dock wiring", f"non-consecutive bays {i} and {j} share {count} edges"
                    )
                continue
            bound = 2 * (d - 3) if n == 2 else d - 3
            if count > bound:
                raise HypothesisViolated(
                    "dock wiring", f"bays {i} and {j} share {count} edges > {bound}"
                )
            nodes.append(
                _node(
                    f"bays {i} and {j} share at most {bound} edges",
                    "bay_pair",
                    f"{count} <= {bound}",
                    {"bays": [i, j], "count": count, "bound": bound},
                )
            )
    return nodes


# -- pod step ----------------------------------------------------------------


def _separation_node(idx: int, cut: int, d: int) -> dict:
    worst = min(x * (d - x) for x in range(1, d))
    return _node(
        f"corners are all inside pod {idx} or all outside it",
        "corner_separation",
        f"min x(d-x) over 1<=x<={d - 1} is {worst} > {cut}",
        {"pod": idx, "cut": cut, "d": d},
    )


def _matching_search(pod: MultiGraph, attach, d: int, budget) -> dict:
    """Search pod + M for every maximum matching M of the complete graph on ``attach``."""
    matchings = maximum_matchings(attach)
    for m in matchings:
        v = find_immersion(pod.add_edges(m), d, budget)
        if v.outcome == UNKNOWN:
            raise BudgetExceeded(f"matching {m} left undecided", v.nodes_explored)
        if v.outcome == IMMERSED:
            return {"holds": False, "matchings_checked": len(matchings), "witness": [list(p) for p in m]}
    return {"holds": True, "matchings_checked": len(matchings)}


def _pod_type(pod_graph: MultiGraph, local_attach, d: int, budget, special: bool) -> dict:
    if special:
        res = _matching_search(pod_graph, local_attach, d, budget)
        res["mode"] = "attachment_matchings"
        return res
    rep = is_pod(pod_graph, d, budget)
    return {
        "holds": rep.is_pod,
        "matchings_checked": rep.matchings_checked,
        "mode": "pod",
        "reason": rep.reason,
        "gadgets": len(rep.gadgets),
    }


def _pod_steps(g, pods, hyp_nodes, d, budget, special, pod_types):
    out = []
    for idx, (pod, hyp) in enumerate(zip(pods, hyp_nodes)):
        sub = g.subgraph(pod)
        order = sorted(pod)
        local = sorted(order.index(v) for v in hyp["data"]["attach"])
        key = canonical_hash(sub) + ":" + ",".join(map(str, local))
        if key not in pod_types:
            if not special:
                degs = sub.degrees()
                bad = [v for v in local if degs[v] != d - 2]
                if bad:
                    raise HypothesisViolated(
                        "pod attachment", f"pod {idx} attaches at vertices of pod degree != d - 2"
                    )
            pod_types[key] = _pod_type(sub, local, d, budget, special)
        info = pod_types[key]
        if not info["holds"]:
            raise HypothesisViolated("pod property", f"pod {idx} admits K_{d}: {info}")
        rule = "attachment_matchings" if special else "pod_property"
        out.append(
            _node(
                f"no K_{d} has all corners in pod {idx}",
                rule,
                f"{info['matchings_checked']} matchings searched exhaustively",
                {"pod": idx, "type": key},
            )
        )
    return out


# -- dock step ---------------------------------------------------------------


def _bay_region(bays, pods, pod_bay, i) -> list[int]:
    region = list(bays[i])
    for p, pod in enumerate(pods):
        if pod_bay[p] == i:
            region.extend(pod)
    return sorted(region)


def _dock_steps(g, pods, bays, pod_bay, d) -> dict:
    dock_size = sum(len(b) for b in bays)
    if dock_size < d:
        return _node(
            "the dock cannot hold d corners",
            "dock_small",
            f"{dock_size} < {d}",
            {"dock_size": dock_size, "d": d},
        )
    n = len(bays)
    cases = []
    for i in range(n):
        region = _bay_region(bays, pods, pod_bay, i)
        cut = edge_cut_size(g, region) if len(region) < g.n else 0
        top = min(len(bays[i]), d - 2)
        for k in range(2, top + 1):
            if k * (d - k) <= cut:
                raise HypothesisViolated("case one", f"bay {i}: {k}(d-{k}) <= {cut}")
        cases.append(
            _node(
                f"bay {i} does not hold between 2 and {top} corners",
                "case_one",
                f"min k(d-k) over 2<=k<={top} exceeds cut {cut}",
                {"bay": i, "side": region, "cut": cut, "k_max": top, "d": d},
            )
        )
    if n < d:
        cases.append(
            _node(
                "corners cannot sit one per bay",
                "pigeonhole",
                f"{n} bays < {d} corners",
                {"bays": n, "d": d},
            )
        )
    else:
        for start in range(n):
            for length in range(2, n):
                arc = [(start + s) % n for s in range(length)]
                region = sorted(v for i in arc for v in _bay_region(bays, pods, pod_bay, i))
                cut = edge_cut_size(g, region)
                if cut >= 2 * (d - 2):
                    raise HypothesisViolated("case two", f"arc {arc} has cut {cut}")
                cases.append(
                    _node(
                        f"bays {arc} cannot hold exactly two corners",
                        "case_two",
                        f"2(d-2) = {2 * (d - 2)} > cut {cut}",
                        {"arc": arc, "side": region, "cut": cut, "d": d},
                    )
                )
    return _node("no K_d has all corners in the dock", "dock_cases", "", {}, cases)


# -- entry points ------------------------------------------------------------


def _refute(g, decomposition, d, budget, special, title) -> RefutationReport:
    start = time.monotonic()
    pods = [sorted(p) for p in decomposition.get("pods", [])]
    bays = [sorted(b) for b in decomposition.get("bays", [])]
    partition = _check_partition(g, pods, bays)
    hyp_pods = _pod_hypotheses(g, pods, bays, d)
    hyp_dock = _dock_hypotheses(g, bays, d)
    hypotheses = _node("structural hypotheses hold", "hypotheses", "", {}, [partition] + hyp_pods + hyp_dock)
    separation = _node(
        "corners lie in one pod or in the dock",
        "localisation",
        "",
        {},
        [_separation_node(i, h["data"]["cut"], d) for i, h in enumerate(hyp_pods)],
    )
    pod_types: dict = {}
    pod_nodes = _pod_steps(g, pods, hyp_pods, d, budget, special, pod_types)
    pod_bay = [h["data"]["bay"] for h in hyp_pods]
    dock = _dock_steps(g, pods, bays, pod_bay, d)
    tree = _node(
        title,
        "conclusion",
        "",
        {"d": d, "n": g.n, "hash": canonical_hash(g)},
        [hypotheses, separation, _node("no pod hosts the corners", "pods", "", {}, pod_nodes), dock],
    )
    return RefutationReport(d, True, tree, pod_types, time.monotonic() - start)


def refute_dock_graph(g: MultiGraph, decomposition: dict, d: int, budget: int | None = None) -> RefutationReport:
    """Prove that ``g`` has no K_d immersion from its pod/bay decomposition.

    ``decomposition`` has keys ``pods`` and ``bays`` (bays in cyclic order).
    Raises :class:`HypothesisViolated` naming the first failed condition.
    """
    return _refute(g, decomposition, d, budget, False, f"no immersion of K_{d}")


def check_special10(g: MultiGraph, decomposition: dict, budget: int | None = None) -> RefutationReport:
    """Refutation for the d = 10 graph whose copies attach at 8 vertices, one of degree 9.

    Those copies are not pods in the strict sense, so each one is searched
    with every perfect matching on its attaching vertices added.
    """
    return _refute(g, decomposition, 10, budget, True, "no immersion of K_10")


# -- independent replay ------------------------------------------------------


def _walk(node):
    yield node
    for child in node["children"]:
        yield from _walk(child)


def replay_refutation(g: MultiGraph, report: dict, rerun_searches: bool = False, budget=None) -> list[str]:
    """Re-derive every claim of a refutation report; returns a list of problems.

    Cut sizes and inequalities are recomputed from ``g``.  Pod verdicts are
    re-searched only when ``rerun_searches`` is set.
    """
    problems = []
    d = report["d"]
    tree = report["tree"]
    if tree["data"].get("hash") != canonical_hash(g):
        problems.append("graph hash differs from the report")
    nodes = list(_walk(tree))
    by_rule: dict[str, list[dict]] = {}
    for node in nodes:
        by_rule.setdefault(node["rule"], []).append(node)

    part = by_rule.get("partition", [])
    if len(part) != 1:
        return problems + ["no partition node"]
    pods = part[0]["data"]["pods"]
    bays = part[0]["data"]["bays"]
    flat = sorted(v for p in pods + bays for v in p)
    if flat != list(range(g.n)):
        return problems + ["decomposition is not a partition"]

    cut_nodes = {tuple(n["data"]["side"]): n for n in by_rule.get("cut_bound", [])}
    for idx, pod in enumerate(pods):
        node = cut_nodes.get(tuple(sorted(pod)))
        if node is None:
            problems.append(f"pod {idx} has no cut bound")
            continue
        cut = edge_cut_size(g, pod)
        if cut != node["data"]["cut"] or cut > d - 2:
            problems.append(f"pod {idx}: cut {cut} does not match or exceeds d - 2")
    seps = {n["data"]["pod"]: n for n in by_rule.get("corner_separation", [])}
    for idx in range(len(pods)):
        node = seps.get(idx)
        if node is None or any(x * (d - x) <= node["data"]["cut"] for x in range(1, d)):
            problems.append(f"pod {idx}: separation inequality missing or false")

    pod_nodes = {n["data"]["pod"]: n for n in by_rule.get("pod_property", []) + by_rule.get("attachment_matchings", [])}
    rerun: dict[str, bool] = {}
    for idx, pod in enumerate(pods):
        node = pod_nodes.get(idx)
        if node is None:
            problems.append(f"pod {idx} has no pod verdict")
            continue
        key = node["data"]["type"]
        sub = g.subgraph(pod)
        if not key.startswith(canonical_hash(sub) + ":"):
            problems.append(f"pod {idx}: subgraph differs from its recorded type")
            continue
        info = report["pod_types"].get(key)
        if not info or not info.get("holds"):
            problems.append(f"pod {idx}: recorded verdict missing or negative")
            continue
        if rerun_searches:
            if key not in rerun:
                local = [int(x) for x in key.split(":")[1].split(",") if x]
                special = node["rule"] == "attachment_matchings"
                rerun[key] = _pod_type(sub, local, d, budget, special)["holds"]
            if not rerun[key]:
                problems.append(f"pod {idx}: re-search found an immersion")

    for n in by_rule.get("bay_pair", []):
        i, j = n["data"]["bays"]
        bj = set(bays[j])
        count = sum(m for v in bays[i] for w, m in g.neighbors(v).items() if w in bj)
        if count != n["data"]["count"] or count > n["data"]["bound"]:
            problems.append(f"bays {i},{j}: edge count {count} disagrees")

    dock_size = sum(len(b) for b in bays)
    if dock_size < d:
        if not by_rule.get("dock_small"):
            problems.append("small dock not recorded")
    else:
        ones = {n["data"]["bay"]: n for n in by_rule.get("case_one", [])}
        for i in range(len(bays)):
            node = ones.get(i)
            if node is None:
                problems.append(f"bay {i}: case one missing")
                continue
            side = node["data"]["side"]
            cut = edge_cut_size(g, side) if len(side) < g.n else 0
            if not set(bays[i]) <= set(side) or cut != node["data"]["cut"]:
                problems.append(f"bay {i}: case one cut disagrees")
            top = min(len(bays[i]), d - 2)
            if node["data"]["k_max"] != top or any(k * (d - k) <= cut for k in range(2, top + 1)):
                problems.append(f"bay {i}: case one inequality false")
        if len(bays) < d:
            if not by_rule.get("pigeonhole"):
                problems.append("case two not covered")
        else:
            arcs = {tuple(n["data"]["arc"]): n for n in by_rule.get("case_two", [])}
            n_b = len(bays)
            for start in range(n_b):
                for length in range(2, n_b):
                    arc = tuple((start + s) % n_b for s in range(length))
                    node = arcs.get(arc)
                    if node is None:
                        problems.append(f"arc {arc} not covered")
                        continue
                    cut = edge_cut_size(g, node["data"]["side"])
                    if not all(set(bays[i]) <= set(node["data"]["side"]) for i in arc):
                        problems.append(f"arc {arc}: side misses a bay")
                    if cut >= 2 * (d - 2):
                        problems.append(f"arc {arc}: case two inequality false")
    return problems
