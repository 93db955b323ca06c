"""Undirected loopless multigraphs with edge multiplicities.

Vertices are the integers ``0..n-1``.  An edge class is stored once under the
key ``(min(u, v), max(u, v))`` together with its multiplicity.  Graphs are
immutable: every edit returns a new :class:`MultiGraph`.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import networkx as nx

from .errors import EmptySide, LoopForbidden, MissingEdge, ParseError, SimpleOnly

Pair = tuple[int, int]


def canon(u: int, v: int) -> Pair:
    if u == v:
        raise LoopForbidden(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class MultiGraph:
    __slots__ = ("_n", "_mult", "_labels", "_adj", "_deg", "_hash")

    def __init__(
        self,
        n: int,
        edges: Mapping[Pair, int] | Iterable[tuple] = (),
        labels: Mapping[int, str] | None = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        mult: dict[Pair, int] = {}
        items = edges.items() if isinstance(edges, Mapping) else edges
        for item in items:
            if len(item) == 2 and isinstance(item[0], tuple):
                (u, v), m = item
            elif len(item) == 2:
                (u, v), m = item, 1
            else:
                u, v, m = item
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            if m < 0:
                raise ValueError("multiplicity must be non-negative")
            if m == 0:
                continue
            key = canon(u, v)
            mult[key] = mult.get(key, 0) + m
        self._n = n
        self._mult = dict(sorted(mult.items()))
        self._labels = dict(sorted((labels or {}).items()))
        for v in self._labels:
            if not 0 <= v < n:
                raise ValueError(f"label on unknown vertex {v}")
        adj: list[dict[int, int]] = [{} for _ in range(n)]
        deg = [0] * n
        for (u, v), m in self._mult.items():
            adj[u][v] = m
            adj[v][u] = m
            deg[u] += m
            deg[v] += m
        self._adj = adj
        self._deg = deg
        self._hash = None

    # -- queries -----------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def labels(self) -> dict[int, str]:
        return dict(self._labels)

    def vertices(self) -> range:
        return range(self._n)

    def multiplicity(self, u: int, v: int) -> int:
        if u == v:
            return 0
        return self._adj[u].get(v, 0)

    def has_edge(self, u: int, v: int) -> bool:
        return self.multiplicity(u, v) > 0

    def degree(self, v: int) -> int:
        return self._deg[v]

    def degrees(self) -> list[int]:
        return list(self._deg)

    def neighbors(self, v: int) -> dict[int, int]:
        """Neighbor -> multiplicity map of ``v`` (a copy)."""
        return dict(self._adj[v])

    def adjacency(self) -> list[dict[int, int]]:
        return [dict(a) for a in self._adj]

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(u, v, m)`` with ``u < v`` in lexicographic order."""
        for (u, v), m in self._mult.items():
            yield u, v, m

    def multiplicities(self) -> dict[Pair, int]:
        return dict(self._mult)

    def pair_count(self) -> int:
        return len(self._mult)

    def edge_count(self) -> int:
        return sum(self._mult.values())

    def is_simple(self) -> bool:
        return all(m == 1 for m in self._mult.values())

    def is_connected(self) -> bool:
        if self._n <= 1:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self._n

    def components(self) -> list[list[int]]:
        seen = [False] * self._n
        out = []
        for s in range(self._n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._n == other._n and self._mult == other._mult

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, tuple(self._mult.items())))
        return self._hash

    def __repr__(self):
        return f"MultiGraph(n={self._n}, pairs={len(self._mult)}, edges={self.edge_count()})"

    # -- edits (all return new graphs) -------------------------------------

    def with_labels(self, labels: Mapping[int, str]) -> MultiGraph:
        return MultiGraph(self._n, self._mult, labels)

    def add_vertices(self, count: int) -> MultiGraph:
        return MultiGraph(self._n + count, self._mult, self._labels)

    def add_edges(self, pairs: Iterable[Pair]) -> MultiGraph:
        mult = dict(self._mult)
        for u, v in pairs:
            key = canon(u, v)
            mult[key] = mult.get(key, 0) + 1
        return MultiGraph(self._n, mult, self._labels)

    def delete_edges(self, pairs: Iterable[Pair]) -> MultiGraph:
        return delete_edges(self, pairs)

    def subgraph(self, vertices: Iterable[int]) -> MultiGraph:
        """Induced subgraph, relabelled to ``0..k-1`` in ascending vertex order."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        mult = {
            (index[u], index[v]): m
            for (u, v), m in self._mult.items()
            if u in index and v in index
        }
        labels = {index[v]: s for v, s in self._labels.items() if v in index}
        return MultiGraph(len(order), mult, labels)

    def relabel(self, mapping: Mapping[int, int], n: int | None = None) -> MultiGraph:
        """Image of the graph under ``mapping``; merging vertices sums multiplicities."""
        size = self._n if n is None else n
        mult: Counter = Counter()
        for (u, v), m in self._mult.items():
            mult[canon(mapping[u], mapping[v])] += m
        return MultiGraph(size, mult)

    def underlying_simple(self) -> MultiGraph:
        return MultiGraph(self._n, {k: 1 for k in self._mult}, self._labels)

    def to_networkx(self, multigraph: bool = False) -> nx.Graph:
        """Export to networkx; simple export stores multiplicity as ``capacity``."""
        if multigraph:
            g = nx.MultiGraph()
            g.add_nodes_from(range(self._n))
            for (u, v), m in self._mult.items():
                for _ in range(m):
                    g.add_edge(u, v)
            return g
        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        for (u, v), m in self._mult.items():
            g.add_edge(u, v, capacity=m, weight=m)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> MultiGraph:
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        mult: Counter = Counter()
        if g.is_multigraph():
            for u, v in g.edges():
                if u != v:
                    mult[canon(index[u], index[v])] += 1
        else:
            for u, v, data in g.edges(data=True):
                if u != v:
                    mult[canon(index[u], index[v])] += int(data.get("capacity", 1))
        return cls(len(nodes), mult)


@dataclass(frozen=True)
class EdgeCut:
    side: frozenset[int]
    size: int


# -- constructors and plumbing ---------------------------------------------


def complete_graph(n: int) -> MultiGraph:
    if n < 1:
        raise ValueError("complete_graph needs n >= 1")
    return MultiGraph(n, {(u, v): 1 for u, v in combinations(range(n), 2)})


def cycle_graph(n: int) -> MultiGraph:
    if n < 3:
        raise ValueError("cycle_graph needs n >= 3")
    return MultiGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> MultiGraph:
    return MultiGraph(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_union(*graphs: MultiGraph) -> tuple[MultiGraph, list[int]]:
    """Disjoint union; also returns the index offset of each input."""
    offsets = []
    mult = {}
    labels = {}
    base = 0
    for g in graphs:
        offsets.append(base)
        for (u, v), m in g.multiplicities().items():
            mult[(u + base, v + base)] = m
        for v, s in g.labels.items():
            labels[v + base] = s
        base += g.n
    return MultiGraph(base, mult, labels), offsets


def delete_edges(g: MultiGraph, pairs: Iterable[Pair]) -> MultiGraph:
    mult = g.multiplicities()
    for u, v in pairs:
        key = canon(u, v)
        m = mult.get(key, 0)
        if m == 0:
            raise MissingEdge(f"no edge between {u} and {v}")
        if m == 1:
            del mult[key]
        else:
            mult[key] = m - 1
    return MultiGraph(g.n, mult, g.labels)


def lift(g: MultiGraph, u: int, v: int, w: int) -> MultiGraph:
    """Replace one ``uv`` and one ``vw`` edge by a single ``uw`` edge."""
    if u == w:
        raise LoopForbidden("lifting would create a loop")
    if g.multiplicity(u, v) < 1:
        raise MissingEdge(f"no edge between {u} and {v}")
    if g.multiplicity(v, w) < 1:
        raise MissingEdge(f"no edge between {v} and {w}")
    return delete_edges(g, [(u, v), (v, w)]).add_edges([(u, w)])


def edge_cut_size(g: MultiGraph, side: Iterable[int]) -> int:
    s = set(side)
    if not s or len(s) >= g.n or not s <= set(range(g.n)):
        raise EmptySide("cut side must be a proper non-empty vertex subset")
    return sum(m for u, v, m in g.edges() if (u in s) != (v in s))


def edge_cut(g: MultiGraph, side: Iterable[int]) -> EdgeCut:
    s = frozenset(side)
    return EdgeCut(s, edge_cut_size(g, s))


# -- text formats ------------------------------------------------------------


def to_edgelist(g: MultiGraph, labels: bool = True) -> str:
    lines = [f"mgraph {g.n} {g.pair_count()}"]
    lines += [f"{u} {v} {m}" for u, v, m in g.edges()]
    if labels:
        lines += [f"label {v} {s}" for v, s in g.labels.items()]
    return "\n".join(lines) + "\n"


def from_edgelist(text: str) -> MultiGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0][0] != "mgraph" or len(rows[0]) != 3:
        raise ParseError("edge list must start with 'mgraph <n> <k>'")
    try:
        n, k = int(rows[0][1]), int(rows[0][2])
        edges = {}
        labels = {}
        for row in rows[1:]:
            if row[0] == "label":
                labels[int(row[1])] = " ".join(row[2:])
                continue
            u, v, m = (int(x) for x in row)
            if u >= v or m < 1:
                raise ParseError(f"bad edge line {' '.join(row)!r}")
            if (u, v) in edges:
                raise ParseError(f"duplicate pair {u} {v}")
            edges[(u, v)] = m
    except (ValueError, IndexError) as exc:
        raise ParseError(str(exc)) from exc
    if len(edges) != k:
        raise ParseError(f"header promises {k} pairs, found {len(edges)}")
    try:
        return MultiGraph(n, edges, labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def to_dot(g: MultiGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices():
        label = g.labels.get(v)
        lines.append(f'  {v} [label="{label}"];' if label else f"  {v};")
    for u, v, m in g.edges():
        lines += [f"  {u} -- {v};"] * m
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graph6(g: MultiGraph) -> str:
    if not g.is_simple():
        raise SimpleOnly("graph6 cannot represent parallel edges")
    return nx.to_graph6_bytes(g.to_networkx(), header=False).decode().strip() + "\n"


def from_graph6(text: str) -> MultiGraph:
    try:
        h = nx.from_graph6_bytes(text.strip().encode())
    except Exception as exc:  # networkx raises a mix of error types here
        raise ParseError(f"bad graph6 string: {exc}") from exc
    return MultiGraph.from_networkx(h)


def canonical_hash(g: MultiGraph) -> str:
    """SHA-256 of the label-free canonical edge list."""
    return hashlib.sha256(to_edgelist(g, labels=False).encode()).hexdigest()
