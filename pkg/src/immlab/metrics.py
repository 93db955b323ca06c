"""Degree, connectivity, clique and chromatic quantities of multigraphs.

Connectivity counts parallel edges as distinct (edge cuts use multiplicities
as capacities).  Cliques and colourings only look at the underlying simple
graph.  The clique and colouring solvers are exact branch and bound searches
over bitsets and raise :class:`BudgetExceeded` rather than return a guess.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass

import networkx as nx

from .errors import BudgetExceeded, EmptyGraph
from .multigraph import MultiGraph, canonical_hash

DEFAULT_BUDGET = 5_000_000


def min_degree(g: MultiGraph) -> int:
    if g.n == 0:
        raise EmptyGraph("graph has no vertices")
    return min(g.degrees())


def degree_histogram(g: MultiGraph) -> dict[int, int]:
    return dict(sorted(Counter(g.degrees()).items()))


def edge_connectivity(g: MultiGraph) -> int:
    """Global minimum edge cut, counting multiplicity; 0 when disconnected."""
    if g.n == 0:
        raise EmptyGraph("graph has no vertices")
    if g.n == 1:
        return 0
    if not g.is_connected():
        return 0
    value, _ = nx.stoer_wagner(g.to_networkx(), weight="weight")
    return int(value)


def vertex_connectivity(g: MultiGraph) -> int:
    if g.n == 0:
        raise EmptyGraph("graph has no vertices")
    if g.n == 1 or not g.is_connected():
        return 0
    return int(nx.node_connectivity(g.underlying_simple().to_networkx()))


def _bitsets(g: MultiGraph) -> list[int]:
    masks = [0] * g.n
    for u, v, _ in g.edges():
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Counter:
    __slots__ = ("nodes", "budget")

    def __init__(self, budget):
        self.nodes = 0
        self.budget = budget

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(spent=self.nodes)


def _max_clique(adj: list[int], candidates: int, counter: _Counter) -> list[int]:
    best: list[int] = []

    def colour_sort(p: int):
        # greedy colouring of p; returns vertices with their colour bound, ascending
        order = []
        colour = 0
        uncoloured = p
        while uncoloured:
            colour += 1
            q = uncoloured
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~adj[v] & ~low
                uncoloured &= ~low
                order.append((v, colour))
        return order

    def expand(current: list[int], p: int):
        nonlocal best
        counter.tick()
        order = colour_sort(p)
        for v, bound in reversed(order):
            if len(current) + bound <= len(best):
                return
            current.append(v)
            newp = p & adj[v]
            if newp:
                expand(current, newp)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            p &= ~(1 << v)

    if candidates:
        expand([], candidates)
    return sorted(best)


def maximum_clique(g: MultiGraph, budget: int = DEFAULT_BUDGET) -> list[int]:
    if g.n == 0:
        raise EmptyGraph("graph has no vertices")
    adj = _bitsets(g)
    return _max_clique(adj, (1 << g.n) - 1, _Counter(budget))


def clique_number(g: MultiGraph, budget: int = DEFAULT_BUDGET) -> int:
    return len(maximum_clique(g, budget))


def _dsatur_order_colouring(adj: list[int], verts: list[int]) -> dict[int, int]:
    colour: dict[int, int] = {}
    sat: dict[int, set] = {v: set() for v in verts}
    deg = {v: bin(adj[v]).count("1") for v in verts}
    remaining = set(verts)
    while remaining:
        v = max(remaining, key=lambda x: (len(sat[x]), deg[x], -x))
        c = 0
        while c in sat[v]:
            c += 1
        colour[v] = c
        remaining.discard(v)
        for w in _bits(adj[v]):
            if w in remaining:
                sat[w].add(c)
    return colour


def _exact_colouring(adj, verts, lower, upper, counter) -> int:
    """Smallest k in [lower, upper) admitting a colouring, else ``upper``."""
    # descending degree order seeds ties; saturation drives the branching
    deg = {v: bin(adj[v]).count("1") for v in verts}
    best = upper

    def feasible(k: int) -> bool:
        colour: dict[int, int] = {}
        forbid = {v: 0 for v in verts}

        def rec(used: int) -> bool:
            counter.tick()
            if len(colour) == len(verts):
                return True
            v = max(
                (x for x in verts if x not in colour),
                key=lambda x: (bin(forbid[x]).count("1"), deg[x], -x),
            )
            for c in range(min(used + 1, k)):
                if forbid[v] >> c & 1:
                    continue
                colour[v] = c
                touched = []
                ok = True
                for w in _bits(adj[v]):
                    if w not in colour and not forbid[w] >> c & 1:
                        forbid[w] |= 1 << c
                        touched.append(w)
                        if forbid[w] == (1 << k) - 1:
                            ok = False
                if ok and rec(max(used, c + 1)):
                    return True
                for w in touched:
                    forbid[w] &= ~(1 << c)
                del colour[v]
            return False

        return rec(0)

    for k in range(lower, upper):
        if feasible(k):
            return k
    return best


def chromatic_number(g: MultiGraph, budget: int = DEFAULT_BUDGET) -> int:
    """Exact chromatic number of the underlying simple graph."""
    if g.n == 0:
        return 0
    adj = _bitsets(g)
    counter = _Counter(budget)
    answer = 1
    for comp in g.components():
        if len(comp) == 1:
            continue
        mask = 0
        for v in comp:
            mask |= 1 << v
        lower = max(2, len(_max_clique(adj, mask, counter)))
        upper = max(_dsatur_order_colouring(adj, comp).values()) + 1
        if upper > lower:
            upper = _exact_colouring(adj, comp, lower, upper, counter)
        answer = max(answer, upper)
    return answer


@dataclass
class MetricsReport:
    min_degree: int
    degree_histogram: dict[int, int]
    edge_connectivity: int
    vertex_connectivity: int | None
    chromatic_number: int
    clique_number: int
    graph_hash: str = ""

    def __post_init__(self):
        if self.clique_number > self.chromatic_number:
            raise ValueError("clique number exceeds chromatic number")
        if self.edge_connectivity > self.min_degree:
            raise ValueError("edge connectivity exceeds minimum degree")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["degree_histogram"] = {str(k): v for k, v in self.degree_histogram.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def metrics_report(
    g: MultiGraph, with_vertex_connectivity: bool = True, budget: int = DEFAULT_BUDGET
) -> MetricsReport:
    return MetricsReport(
        min_degree=min_degree(g),
        degree_histogram=degree_histogram(g),
        edge_connectivity=edge_connectivity(g),
        vertex_connectivity=vertex_connectivity(g) if with_vertex_connectivity else None,
        chromatic_number=chromatic_number(g, budget),
        clique_number=clique_number(g, budget),
        graph_hash=canonical_hash(g),
    )
