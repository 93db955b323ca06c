"""Automorphisms of multigraphs and orbits of vertex sets.

Any collection of genuine automorphisms is safe to use for pruning: the orbit
closure below only ever relates corner sets that some automorphism maps onto
each other, so a partial group gives a weaker but still sound reduction.
"""

from __future__ import annotations

from collections import deque

from networkx.algorithms.isomorphism import GraphMatcher

from ..multigraph import MultiGraph


def automorphisms(g: MultiGraph, limit: int = 512) -> list[tuple[int, ...]]:
    """Up to ``limit`` non-identity automorphisms, as image tuples."""
    if g.n <= 1 or limit <= 0:
        return []
    h = g.to_networkx()
    for v in h.nodes:
        h.nodes[v]["deg"] = g.degree(v)
    matcher = GraphMatcher(
        h,
        h,
        node_match=lambda a, b: a["deg"] == b["deg"],
        edge_match=lambda a, b: a["capacity"] == b["capacity"],
    )
    identity = tuple(range(g.n))
    out = []
    for mapping in matcher.isomorphisms_iter():
        perm = tuple(mapping[v] for v in range(g.n))
        if perm != identity:
            out.append(perm)
            if len(out) >= limit:
                break
    return out


def apply_to_mask(perm: tuple[int, ...], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << perm[low.bit_length() - 1]
        mask ^= low
    return out


def orbit_of_set(mask: int, perms: list[tuple[int, ...]], cap: int = 100_000) -> set[int]:
    """Orbit of a vertex set (bitmask) under the group generated by ``perms``."""
    seen = {mask}
    queue = deque([mask])
    while queue and len(seen) < cap:
        m = queue.popleft()
        for p in perms:
            img = apply_to_mask(p, m)
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return seen
