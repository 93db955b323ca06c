"""Backtracking search for edge-disjoint paths between given vertex pairs.

Demands are routed one at a time: the next demand is the one with the fewest
shortest paths, and its candidate paths are enumerated shortest first inside
the blocks that any simple path between its ends must stay in.  After each
choice the remaining demands must still be reachable, every terminal must keep
an edge per pending path, each terminal must be able to send one unit of flow
per pending path to its partners, and the summed shortest distances must fit
in the remaining edges.  Failed states are memoised by (remaining demands, consumed
edge multiset).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable

from ..multigraph import MultiGraph

_MEMO_CAP = 200_000


class OutOfBudget(Exception):
    pass


@dataclass
class RouteOptions:
    adjacent_reduction: bool = True
    peg_rule: bool = True
    distance_bound: bool = True
    memo: bool = True
    flow_check: bool = True


class NodeCounter:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int):
        self.nodes = 0
        self.limit = limit

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise OutOfBudget


class Router:
    def __init__(
        self,
        g: MultiGraph,
        demands: dict[Hashable, tuple[int, int]],
        opts: RouteOptions,
        counter: NodeCounter,
    ):
        self.g = g
        self.demands = dict(demands)
        self.opts = opts
        self.counter = counter
        self.res = g.adjacency()
        self.rdeg = g.degrees()
        self.terminal = [False] * g.n
        self.pending = [0] * g.n
        for a, b in self.demands.values():
            self.terminal[a] = self.terminal[b] = True
        self.assigned: dict[Hashable, list[int]] = {}
        self.used: dict[tuple[int, int], int] = {}
        self.failed: set = set()
        self.total_edges = g.edge_count()

    def _take(self, path):
        res, rdeg, used = self.res, self.rdeg, self.used
        for a, b in zip(path, path[1:]):
            m = res[a][b] - 1
            if m:
                res[a][b] = m
                res[b][a] = m
            else:
                del res[a][b]
                del res[b][a]
            rdeg[a] -= 1
            rdeg[b] -= 1
            key = (a, b) if a < b else (b, a)
            used[key] = used.get(key, 0) + 1
        self.total_edges -= len(path) - 1

    def _give(self, path):
        res, rdeg, used = self.res, self.rdeg, self.used
        for a, b in zip(path, path[1:]):
            m = res[a].get(b, 0) + 1
            res[a][b] = m
            res[b][a] = m
            rdeg[a] += 1
            rdeg[b] += 1
            key = (a, b) if a < b else (b, a)
            c = used[key] - 1
            if c:
                used[key] = c
            else:
                del used[key]
        self.total_edges += len(path) - 1

    def _can_pass(self, w: int) -> bool:
        if self.terminal[w] and self.opts.peg_rule:
            return self.rdeg[w] - self.pending[w] >= 2
        return self.rdeg[w] >= 2

    def _bfs(self, src: int, within=None):
        """Distances and shortest-path counts from ``src`` through passable vertices."""
        dist = {src: 0}
        count = {src: 1}
        order = deque([src])
        res = self.res
        while order:
            x = order.popleft()
            if x != src and not self._can_pass(x):
                continue
            dx = dist[x] + 1
            cx = count[x]
            for y in res[x]:
                if within is not None and y not in within:
                    continue
                dy = dist.get(y)
                if dy is None:
                    dist[y] = dx
                    count[y] = cx
                    order.append(y)
                elif dy == dx:
                    count[y] += cx
        return dist, count

    def run(self) -> dict | None:
        open_demands = []
        for key, (a, b) in self.demands.items():
            if self.opts.adjacent_reduction and self.res[a].get(b, 0) > 0:
                self._take([a, b])
                self.assigned[key] = [a, b]
            else:
                open_demands.append(key)
                self.pending[a] += 1
                self.pending[b] += 1
        if self._search(open_demands):
            return dict(self.assigned)
        return None

    def _choose(self, keys):
        for v in range(self.g.n):
            if self.pending[v] and self.rdeg[v] < self.pending[v]:
                return None
        if self.opts.flow_check and not self._flow_ok(keys):
            return None
        cache = {}
        best = None
        best_rank = None
        need = 0
        for key in keys:
            a, b = self.demands[key]
            if b not in cache:
                cache[b] = self._bfs(b)
            dist, count = cache[b]
            d = dist.get(a)
            if d is None:
                return None
            need += d
            rank = (count[a], -d, repr(key))
            if best_rank is None or rank < best_rank:
                best_rank = rank
                best = key
        if self.opts.distance_bound and need > self.total_edges:
            return None
        return best

    def _flow_ok(self, keys) -> bool:
        """Each terminal can push one unit per pending demand to its partners.

        A single-source max-flow relaxation: partners act as sinks with
        capacity equal to the number of demands shared with the source.  Pass
        restrictions are ignored here, which keeps it a relaxation.
        """
        partners: dict[int, dict[int, int]] = {}
        for key in keys:
            a, b = self.demands[key]
            partners.setdefault(a, {})[b] = partners.get(a, {}).get(b, 0) + 1
            partners.setdefault(b, {})[a] = partners.get(b, {}).get(a, 0) + 1
        res = self.res
        for s, sinks in partners.items():
            need = sum(sinks.values())
            if need <= 1:
                continue
            room = dict(sinks)
            flow: dict[tuple[int, int], int] = {}
            for _ in range(need):
                prev = {s: None}
                queue = deque([s])
                end = None
                while queue and end is None:
                    x = queue.popleft()
                    for y, m in res[x].items():
                        if y in prev or flow.get((x, y), 0) - flow.get((y, x), 0) >= m:
                            continue
                        prev[y] = x
                        if room.get(y, 0) > 0:
                            end = y
                            break
                        queue.append(y)
                if end is None:
                    return False
                room[end] -= 1
                y = end
                while prev[y] is not None:
                    x = prev[y]
                    if flow.get((y, x), 0) > 0:
                        flow[(y, x)] -= 1
                    else:
                        flow[(x, y)] = flow.get((x, y), 0) + 1
                    y = x
        return True

    def _search(self, keys) -> bool:
        self.counter.tick()
        if not keys:
            return True
        state = None
        if self.opts.memo:
            state = (frozenset(keys), frozenset(self.used.items()))
            if state in self.failed:
                return False
        key = self._choose(keys)
        allowed = None
        if key is not None:
            a, b = self.demands[key]
            allowed = self._allowed(a, b)
        if allowed is not None:
            dist = self._bfs(b, allowed)[0]
            rest = [k for k in keys if k != key]
            for length in range(dist[a], len(allowed)):
                for path in self._paths(a, b, length, dist):
                    self._take(path)
                    self.pending[a] -= 1
                    self.pending[b] -= 1
                    self.assigned[key] = path
                    if self._search(rest):
                        return True
                    del self.assigned[key]
                    self.pending[a] += 1
                    self.pending[b] += 1
                    self._give(path)
        if state is not None and len(self.failed) < _MEMO_CAP:
            self.failed.add(state)
        return False

    def _allowed(self, a: int, b: int):
        """Vertices lying on some simple a-b path through passable vertices.

        These are the blocks met along the block-cut tree path from ``a`` to
        ``b``; returns None when ``b`` is unreachable.
        """
        res = self.res

        def ok(x):
            return x == a or x == b or self._can_pass(x)

        index = {a: 0}
        low = {a: 0}
        counter = 1
        vstack = [a]
        blocks: list[list[int]] = []
        stack = [(a, None, iter(res[a]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if not ok(w):
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    vstack.append(w)
                    stack.append((w, v, iter(res[w])))
                    advanced = True
                    break
                if w != parent and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                if low[v] < low[parent]:
                    low[parent] = low[v]
                if low[v] >= index[parent]:
                    block = [parent]
                    while True:
                        x = vstack.pop()
                        block.append(x)
                        if x == v:
                            break
                    blocks.append(block)
        if b not in index:
            return None
        member: dict[int, list[int]] = {}
        for bi, block in enumerate(blocks):
            for x in block:
                member.setdefault(x, []).append(bi)
        start = ("v", a)
        goal = ("v", b)
        prev = {start: None}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            if node == goal:
                break
            kind, x = node
            if kind == "v":
                nbrs = [("b", bi) for bi in member.get(x, ())]
            else:
                nbrs = [("v", y) for y in blocks[x] if y in (a, b) or len(member[y]) > 1]
            for nb in nbrs:
                if nb not in prev:
                    prev[nb] = node
                    queue.append(nb)
        allowed = set()
        node = goal
        while node is not None:
            if node[0] == "b":
                allowed.update(blocks[node[1]])
            node = prev[node]
        return allowed

    def _paths(self, a: int, b: int, length: int, dist: dict):
        """Simple paths a -> b of exactly ``length`` edges in the residual graph."""
        res = self.res
        path = [a]
        on_path = {a}
        out = []

        def rec(x, left):
            for y in sorted(res[x]):
                if y == b:
                    if left == 1:
                        out.append(path + [b])
                    continue
                if left == 1 or y in on_path:
                    continue
                dy = dist.get(y)
                if dy is None or dy > left - 1 or not self._can_pass(y):
                    continue
                path.append(y)
                on_path.add(y)
                rec(y, left - 1)
                on_path.discard(y)
                path.pop()

        # materialised up front: the residual graph changes while the caller recurses
        rec(a, length)
        return out


def edge_disjoint_paths(
    g: MultiGraph,
    demands: dict[Hashable, tuple[int, int]],
    counter: NodeCounter,
    opts: RouteOptions | None = None,
) -> dict | None:
    """Vertex paths for every demand, pairwise edge-disjoint, or None.

    Raises :class:`OutOfBudget` when ``counter`` runs out.
    """
    return Router(g, demands, opts or RouteOptions(), counter).run()
