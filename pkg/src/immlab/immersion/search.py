"""Exact search for immersions of complete graphs.

The search enumerates corner sets and, for each one, backtracks over
edge-disjoint path systems.  Sound reductions used:

* corners need degree >= t - 1;
* any edge cut of size w separating x corners from t - x corners must have
  ``x * (t - x) <= w`` (checked on the cuts of a Gomory-Hu tree, which also
  confines corners to one class of the "locally (t-1)-edge-connected" relation);
* adjacent corners are joined by one of their own edges;
* a corner may carry a path through it only if it has two edges to spare
  beyond its own pending paths (a corner of degree <= t is never a peg);
* corner sets in one orbit of a known group of automorphisms share a verdict.

Excursions.  When the corners lie in a class M with few boundary edges, every
path that leaves M does so in excursions: it exits along one boundary edge,
wanders outside, and comes back along another.  Which excursions can coexist
depends only on the outside graph, so the search first lists the maximal
families of boundary-edge pairs that can be joined edge-disjointly outside M,
replaces each family by "virtual" edges inside G[M], and searches only the
small graphs G[M] + virtual edges.  A solution there expands back into walks
of the original graph, which are shortcut to paths and verified.

``NotImmersed`` is only reported when every corner set was exhausted or pruned
by one of these rules; running out of budget yields ``Unknown``.
"""

from __future__ import annotations

import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import networkx as nx

from ..multigraph import MultiGraph, canon
from .certificate import ImmersionCertificate, verify_certificate
from .routing import NodeCounter, OutOfBudget, RouteOptions, edge_disjoint_paths
from .symmetry import automorphisms, orbit_of_set

log = logging.getLogger(__name__)

IMMERSED = "immersed"
NOT_IMMERSED = "not_immersed"
UNKNOWN = "unknown"

DEFAULT_NODE_BUDGET = 10_000_000


def default_budget() -> int:
    env = os.environ.get("IMMLAB_BUDGET_NODES")
    return int(env) if env else DEFAULT_NODE_BUDGET


@dataclass
class SearchOptions:
    adjacent_reduction: bool = True
    cut_pruning: bool = True
    distance_bound: bool = True
    peg_rule: bool = True
    symmetry: bool = True
    memo: bool = True
    excursions: bool = True
    excursion_limit: int = 10
    max_automorphisms: int = 512

    def route_options(self) -> RouteOptions:
        return RouteOptions(
            adjacent_reduction=self.adjacent_reduction,
            peg_rule=self.peg_rule,
            distance_bound=self.distance_bound,
            memo=self.memo,
        )


@dataclass
class SearchVerdict:
    outcome: str
    t: int
    certificate: ImmersionCertificate | None = None
    nodes_explored: int = 0
    corner_sets_total: int = 0
    corner_sets_searched: int = 0
    corner_sets_pruned: int = 0
    corner_sets_symmetric: int = 0
    corner_sets_unknown: int = 0
    elapsed: float = 0.0
    feasible_corner_sets: list = field(default_factory=list)

    @property
    def immersed(self) -> bool:
        return self.outcome == IMMERSED

    @property
    def not_immersed(self) -> bool:
        return self.outcome == NOT_IMMERSED

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "t": self.t,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "nodes_explored": self.nodes_explored,
            "corner_sets_total": self.corner_sets_total,
            "corner_sets_searched": self.corner_sets_searched,
            "corner_sets_pruned": self.corner_sets_pruned,
            "corner_sets_symmetric": self.corner_sets_symmetric,
            "corner_sets_unknown": self.corner_sets_unknown,
        }


def corner_split_infeasible(t: int, cut: int) -> bool:
    """True iff no split of t corners across a cut of this size is routable."""
    if t < 2 or cut < 0:
        raise ValueError("need t >= 2 and cut >= 0")
    return all(x * (t - x) > cut for x in range(1, t))


# -- Gomory-Hu cut structure -------------------------------------------------


def gomory_hu_cuts(g: MultiGraph) -> list[tuple[int, int]]:
    """Fundamental cuts of a Gomory-Hu forest as ``(side_bitmask, weight)``."""
    cuts = []
    for comp in g.components():
        if len(comp) < 2:
            continue
        sub = g.subgraph(comp)
        tree = nx.gomory_hu_tree(sub.to_networkx(), capacity="capacity")
        for a, b, data in tree.edges(data=True):
            t2 = tree.copy()
            t2.remove_edge(a, b)
            side = nx.node_connected_component(t2, a)
            mask = 0
            for v in side:
                mask |= 1 << comp[v]
            cuts.append((mask, int(data["weight"])))
    return cuts


def connectivity_classes(g: MultiGraph, threshold: int, cuts=None) -> list[list[int]]:
    """Classes of the relation "local edge connectivity >= threshold".

    Two vertices share a class iff they lie in one component and no
    Gomory-Hu cut lighter than ``threshold`` separates them.
    """
    if cuts is None:
        cuts = gomory_hu_cuts(g)
    light = [mask for mask, w in cuts if w < threshold]
    owner = {}
    for i, comp in enumerate(g.components()):
        for v in comp:
            owner[v] = i
    groups: dict[tuple, list[int]] = {}
    for v in g.vertices():
        sig = (owner[v],) + tuple((mask >> v) & 1 for mask in light)
        groups.setdefault(sig, []).append(v)
    return sorted(groups.values())


# -- excursion reduction -----------------------------------------------------


@dataclass
class ExcursionPlan:
    """Reduced graphs for corner sets inside ``members``.

    ``graphs[k]`` is G[members] (relabelled by position) plus one virtual edge
    per excursion of the k-th maximal family; ``walks[k]`` maps each virtual
    local pair to the original-graph walks realising it.
    """

    members: list[int]
    base: MultiGraph
    graphs: list[MultiGraph]
    walks: list[dict[tuple[int, int], list[list[int]]]]


def excursion_plan(g: MultiGraph, members, limit: int, budget: int) -> ExcursionPlan | None:
    """Build the reduction for vertex set ``members``, or None when it does not apply.

    None is returned when the boundary is empty or larger than ``limit``, or
    when some outside routing question exhausted ``budget``.
    """
    members = sorted(members)
    inside = set(members)
    boundary = []  # one entry (inside end, outside end) per edge instance
    for x in members:
        for y, m in sorted(g.neighbors(x).items()):
            if y not in inside:
                boundary.extend([(x, y)] * m)
    if not 0 < len(boundary) <= limit:
        return None
    outside = [v for v in g.vertices() if v not in inside]
    out_index = {v: i for i, v in enumerate(outside)}
    outer = g.subgraph(outside)
    cache: dict[tuple, dict | None] = {}

    def demand_key(pairs):
        key = []
        for i, j in pairs:
            y1, y2 = boundary[i][1], boundary[j][1]
            if y1 != y2:
                key.append(canon(out_index[y1], out_index[y2]))
        return tuple(sorted(key))

    def realizable(pairs) -> bool:
        key = demand_key(pairs)
        if key not in cache:
            demands = dict(enumerate(key))
            cache[key] = edge_disjoint_paths(outer, demands, NodeCounter(budget))
        return cache[key] is not None

    maximal = []
    n_b = len(boundary)

    def extend(i, pairs, free):
        while i < n_b and i not in free:
            i += 1
        if i == n_b:
            rest = sorted(free)
            for u, v in combinations(rest, 2):
                if boundary[u][0] != boundary[v][0] and realizable(pairs + [(u, v)]):
                    return
            maximal.append(list(pairs))
            return
        free.discard(i)
        for j in sorted(free):
            if j > i and boundary[i][0] != boundary[j][0]:
                trial = pairs + [(i, j)]
                if realizable(trial):
                    free.discard(j)
                    extend(i + 1, trial, free)
                    free.add(j)
        extend(i + 1, pairs, free)
        free.add(i)

    try:
        extend(0, [], set(range(n_b)))
    except OutOfBudget:
        return None

    # keep families whose virtual-edge multisets are not dominated by another's
    by_multiset: dict[tuple, list] = {}
    for pairs in maximal:
        virt = tuple(sorted(canon(boundary[i][0], boundary[j][0]) for i, j in pairs))
        by_multiset.setdefault(virt, pairs)
    keys = sorted(by_multiset, key=lambda k: (-len(k), k))
    kept = []
    for k in keys:
        ck = Counter(k)
        if any(not (ck - Counter(other)) for other in kept if len(other) > len(k)):
            continue
        kept.append(k)

    local = {v: i for i, v in enumerate(members)}
    base = g.subgraph(members)
    graphs, walks = [], []
    for k in kept:
        pairs = by_multiset[k]
        key = demand_key(pairs)
        routes = cache.get(key) or {}
        # outside paths per outer pair, consumed in order
        pool: dict[tuple[int, int], list[list[int]]] = {}
        for idx, pr in enumerate(key):
            pool.setdefault(pr, []).append([outside[z] for z in routes[idx]])
        table: dict[tuple[int, int], list[list[int]]] = {}
        for i, j in pairs:
            (x1, y1), (x2, y2) = boundary[i], boundary[j]
            if y1 == y2:
                mid = [y1]
            else:
                mid = pool[canon(out_index[y1], out_index[y2])].pop()
                if mid[0] != y1:
                    mid = mid[::-1]
            walk = [x1] + mid + [x2]
            lx, ly = local[x1], local[x2]
            if lx > ly:
                walk = walk[::-1]
            table.setdefault(canon(lx, ly), []).append(walk)
        graphs.append(base.add_edges([(local[a], local[b]) for a, b in k]))
        walks.append(table)
    return ExcursionPlan(members, base, graphs, walks)


def _shortcut(walk: list[int]) -> list[int]:
    out: list[int] = []
    pos: dict[int, int] = {}
    for v in walk:
        if v in pos:
            cut = pos[v]
            for w in out[cut + 1:]:
                del pos[w]
            del out[cut + 1:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


def _expand(plan: ExcursionPlan, k: int, local_paths: dict) -> dict:
    members = plan.members
    spare = {pair: list(ws) for pair, ws in plan.walks[k].items()}
    used: Counter = Counter()
    out = {}
    for key in sorted(local_paths):
        seq = local_paths[key]
        walk = [members[seq[0]]]
        for a, b in zip(seq, seq[1:]):
            pair = canon(a, b)
            if used[pair] < plan.base.multiplicity(a, b):
                used[pair] += 1
                walk.append(members[b])
            else:
                w = spare[pair].pop()
                if w[0] != members[a]:
                    w = w[::-1]
                walk.extend(w[1:])
        out[key] = _shortcut(walk)
    return out


# -- one corner set ----------------------------------------------------------


def route_corner_set(
    g: MultiGraph,
    corners,
    opts: SearchOptions | None = None,
    budget: int | None = None,
    plan: ExcursionPlan | None = None,
):
    """Search a path system on a fixed corner set.

    Returns ``(vertex_paths, nodes)`` where ``vertex_paths`` maps corner index
    pairs to vertex sequences, or is None (no system) or ``UNKNOWN``.
    """
    opts = opts or SearchOptions()
    counter = NodeCounter(default_budget() if budget is None else budget)
    ropts = opts.route_options()
    pairs = list(combinations(range(len(corners)), 2))
    try:
        if plan is None:
            demands = {(i, j): (corners[i], corners[j]) for i, j in pairs}
            return edge_disjoint_paths(g, demands, counter, ropts), counter.nodes
        local = {v: i for i, v in enumerate(plan.members)}
        demands = {(i, j): (local[corners[i]], local[corners[j]]) for i, j in pairs}
        for k, reduced in enumerate(plan.graphs):
            found = edge_disjoint_paths(reduced, demands, counter, ropts)
            if found is not None:
                return _expand(plan, k, found), counter.nodes
        return None, counter.nodes
    except OutOfBudget:
        return UNKNOWN, counter.nodes


def _route_job(args):
    g, idx, corners, opts, budget, plan = args
    result, nodes = route_corner_set(g, corners, opts, budget, plan)
    return idx, corners, result, nodes


# -- corner-set enumeration --------------------------------------------------


def _corner_groups(g: MultiGraph, t: int, opts: SearchOptions, cuts):
    """``(class, candidate corners)`` pairs; the class is None without cut pruning."""
    if opts.cut_pruning:
        out = []
        for cls in connectivity_classes(g, t - 1, cuts):
            grp = [v for v in cls if g.degree(v) >= t - 1]
            if len(grp) >= t:
                out.append((cls, grp))
        return sorted(out, key=lambda p: p[1])
    cand = [v for v in g.vertices() if g.degree(v) >= t - 1]
    return [(None, cand)] if len(cand) >= t else []


def _split_ok(mask: int, t: int, cuts) -> bool:
    for side, w in cuts:
        x = bin(mask & side).count("1")
        if 0 < x < t and x * (t - x) > w:
            return False
    return True


def find_immersion(
    g: MultiGraph,
    t: int,
    budget: int | None = None,
    *,
    options: SearchOptions | None = None,
    time_limit: float | None = None,
    preferred_corners=None,
    jobs: int = 1,
    collect_all: bool = False,
) -> SearchVerdict:
    """Decide whether ``K_t`` is immersed in ``g``.

    ``budget`` caps search nodes per corner set.  With ``collect_all`` every
    corner set is searched and the feasible ones are listed in
    ``feasible_corner_sets`` (as ``(corners, certificate)`` pairs).
    """
    opts = options or SearchOptions()
    budget = default_budget() if budget is None else budget
    start = time.monotonic()
    verdict = SearchVerdict(NOT_IMMERSED, t)
    if t < 1:
        raise ValueError("t must be positive")
    if t == 1:
        if g.n == 0:
            return verdict
        verdict.outcome = IMMERSED
        verdict.certificate = ImmersionCertificate(1, (0,), {})
        return verdict
    if sum(1 for v in g.vertices() if g.degree(v) >= t - 1) < t:
        return verdict

    cuts = gomory_hu_cuts(g) if opts.cut_pruning else []
    autos: list | None = None  # computed once the first corner set has failed
    done: set[int] = set()

    groups = _corner_groups(g, t, opts, cuts)
    verdict.corner_sets_total = sum(comb(len(grp), t) for _, grp in groups)
    pref = tuple(sorted(preferred_corners)) if preferred_corners is not None else None

    def candidates():
        if pref is not None:
            for gi, (_, grp) in enumerate(groups):
                if len(pref) == t and set(pref) <= set(grp):
                    yield pref, gi
        for gi, (_, grp) in enumerate(groups):
            for combo in combinations(grp, t):
                if combo != pref:
                    yield combo, gi

    def filtered():
        for combo, gi in candidates():
            mask = 0
            for v in combo:
                mask |= 1 << v
            if mask in done:
                verdict.corner_sets_symmetric += 1
                continue
            if opts.cut_pruning and not _split_ok(mask, t, cuts):
                verdict.corner_sets_pruned += 1
                continue
            yield combo, gi
            if opts.symmetry and not collect_all:
                nonlocal autos
                if autos is None:
                    autos = automorphisms(g, opts.max_automorphisms)
                if autos:
                    done.update(orbit_of_set(mask, autos))

    plans: dict[int, ExcursionPlan | None] = {}

    def plan_for(gi):
        if not opts.excursions:
            return None
        if gi not in plans:
            cls = groups[gi][0]
            plans[gi] = excursion_plan(g, cls, opts.excursion_limit, budget) if cls else None
        return plans[gi]

    found = []

    def record(corners, paths):
        cert = ImmersionCertificate.from_vertex_paths(g, corners, paths)
        check = verify_certificate(g, cert)
        if not check:
            raise AssertionError(f"search produced an invalid certificate: {check}")
        found.append((corners, cert))

    if jobs > 1:
        args = [
            (g, idx, combo, opts, budget, plan_for(gi)) for idx, (combo, gi) in enumerate(filtered())
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = sorted(
                pool.map(_route_job, args, chunksize=max(1, len(args) // (4 * jobs))),
                key=lambda r: r[0],
            )
        for idx, combo, result, nodes in results:
            verdict.nodes_explored += nodes
            verdict.corner_sets_searched += 1
            if result == UNKNOWN:
                verdict.corner_sets_unknown += 1
            elif result is not None:
                record(combo, result)
    else:
        for combo, gi in filtered():
            if time_limit is not None and time.monotonic() - start > time_limit:
                verdict.corner_sets_unknown += 1
                break
            result, nodes = route_corner_set(g, combo, opts, budget, plan_for(gi))
            verdict.nodes_explored += nodes
            verdict.corner_sets_searched += 1
            if result == UNKNOWN:
                verdict.corner_sets_unknown += 1
                log.debug("corner set %s exhausted its budget", combo)
            elif result is not None:
                record(combo, result)
                if not collect_all:
                    break

    verdict.elapsed = time.monotonic() - start
    if found:
        verdict.outcome = IMMERSED
        verdict.certificate = found[0][1]
        if collect_all:
            verdict.feasible_corner_sets = found
    elif verdict.corner_sets_unknown:
        verdict.outcome = UNKNOWN
    return verdict
