"""Pruning-free reference search for complete-graph immersions.

Deliberately naive: every t-subset of vertices is a corner set, every simple
path between each corner pair is a candidate, and edge instances are tracked
explicitly.  Only meant for graphs of at most a dozen edges or so.  It shares
no code with the pruned engine so the two can be compared.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ..multigraph import MultiGraph


def _instances(g: MultiGraph):
    inst = []
    for u, v, m in g.edges():
        for k in range(m):
            inst.append((u, v, k))
    return inst


def _all_paths(g: MultiGraph, inst, a: int, b: int) -> list[int]:
    """Every simple a-b path, as a bitmask over edge instances."""
    incident: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for idx, (u, v, _) in enumerate(inst):
        incident[u].append(idx)
        incident[v].append(idx)
    out = []

    def rec(x, visited, mask):
        if x == b:
            out.append(mask)
            return
        for idx in incident[x]:
            u, v, _ = inst[idx]
            y = v if u == x else u
            if y in visited:
                continue
            rec(y, visited | {y}, mask | (1 << idx))

    rec(a, {a}, 0)
    return out


def brute_force_paths(g: MultiGraph, corners) -> dict | None:
    """Edge-disjoint path system on ``corners`` as instance lists, or None."""
    inst = _instances(g)
    pairs = list(combinations(range(len(corners)), 2))
    options = [_all_paths(g, inst, corners[i], corners[j]) for i, j in pairs]

    @lru_cache(maxsize=None)
    def solve(k: int, used: int):
        if k == len(pairs):
            return ()
        for mask in options[k]:
            if mask & used:
                continue
            rest = solve(k + 1, used | mask)
            if rest is not None:
                return (mask,) + rest
        return None

    chosen = solve(0, 0)
    if chosen is None:
        return None
    result = {}
    for (i, j), mask in zip(pairs, chosen):
        edges = [inst[idx] for idx in range(len(inst)) if mask >> idx & 1]
        result[(i, j)] = _order_walk(edges, corners[i])
    return result


def _order_walk(edges, start):
    remaining = list(edges)
    at = start
    ordered = []
    while remaining:
        for e in remaining:
            if at in e[:2]:
                ordered.append(e)
                remaining.remove(e)
                at = e[1] if e[0] == at else e[0]
                break
    return tuple(ordered)


def brute_force_immersion(g: MultiGraph, t: int, all_sets: bool = False):
    """Return a certificate dict ``{"corners", "paths"}`` (or a list of them), or None."""
    from .certificate import ImmersionCertificate

    found = []
    for corners in combinations(range(g.n), t):
        paths = brute_force_paths(g, corners)
        if paths is not None:
            cert = ImmersionCertificate(t, tuple(corners), paths)
            if not all_sets:
                return cert
            found.append(cert)
    return found if all_sets else None
