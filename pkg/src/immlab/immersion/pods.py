"""Pod verification: degree profile, gadget detection and the matching-augmented search."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from ..errors import BudgetExceeded
from ..multigraph import MultiGraph
from .search import IMMERSED, UNKNOWN, SearchOptions, find_immersion


@dataclass(frozen=True)
class Gadget:
    kind: str  # "odd-cycle-in-A" or "path2-B-A-B"
    vertices: tuple[int, ...]


@dataclass
class PodReport:
    d: int
    A: list[int]
    B: list[int]
    gadgets: list[Gadget] = field(default_factory=list)
    matchings_checked: int = 0
    is_pod: bool = False
    reason: str = ""
    witness_matching: list | None = None
    witness_certificate: object = None
    per_matching: list = field(default_factory=list)  # (matching, outcome, nodes)
    gadget_condition: bool = False

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "A": self.A,
            "B": self.B,
            "gadgets": [{"kind": g.kind, "vertices": list(g.vertices)} for g in self.gadgets],
            "gadget_condition": self.gadget_condition,
            "matchings_checked": self.matchings_checked,
            "is_pod": self.is_pod,
            "reason": self.reason,
            "witness_matching": self.witness_matching,
            "witness_certificate": (
                self.witness_certificate.to_dict() if self.witness_certificate else None
            ),
            "per_matching": [
                {"matching": [list(p) for p in m], "outcome": o, "nodes": n}
                for m, o, n in self.per_matching
            ],
        }


def maximum_matchings(vertices) -> list[list[tuple[int, int]]]:
    """All maximum matchings of the complete graph on ``vertices``."""
    vs = sorted(vertices)
    if len(vs) % 2:
        out = []
        for skip in vs:
            rest = [v for v in vs if v != skip]
            out.extend(perfect_matchings(rest))
        return out
    return perfect_matchings(vs)


def perfect_matchings(vs) -> list[list[tuple[int, int]]]:
    """All perfect matchings of the complete graph on the (even-size) list ``vs``."""
    if not vs:
        return [[]]
    first, rest = vs[0], vs[1:]
    out = []
    for idx, partner in enumerate(rest):
        for m in perfect_matchings(rest[:idx] + rest[idx + 1:]):
            out.append([(first, partner)] + m)
    return out


def _odd_missing_cycles(g: MultiGraph, A: list[int]) -> list[tuple[int, ...]]:
    aset = set(A)
    miss = {a: sorted(b for b in A if b != a and not g.has_edge(a, b)) for a in A}
    cycles = []

    def rec(start, path, on):
        x = path[-1]
        for y in miss[x]:
            if y == start and len(path) >= 3 and len(path) % 2 == 1 and path[1] < path[-1]:
                cycles.append(tuple(path))
            elif y > start and y not in on and y in aset:
                path.append(y)
                on.add(y)
                rec(start, path, on)
                on.discard(y)
                path.pop()

    for s in sorted(A):
        rec(s, [s], {s})
    return cycles


def find_gadgets(g: MultiGraph, d: int) -> tuple[list[Gadget], list[Gadget]]:
    """All gadgets and a largest vertex-disjoint family of them."""
    A = [v for v in g.vertices() if g.degree(v) == d - 2]
    B = [v for v in g.vertices() if g.degree(v) != d - 2]
    found = [Gadget("odd-cycle-in-A", c) for c in _odd_missing_cycles(g, A)]
    for a in A:
        ends = [b for b in B if not g.has_edge(a, b)]
        for b1, b2 in combinations(ends, 2):
            found.append(Gadget("path2-B-A-B", (b1, a, b2)))
    best: list[Gadget] = []

    def pack(idx, chosen, used):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if len(chosen) + len(found) - idx <= len(best):
            return
        for k in range(idx, len(found)):
            vs = set(found[k].vertices)
            if vs & used:
                continue
            chosen.append(found[k])
            pack(k + 1, chosen, used | vs)
            chosen.pop()

    pack(0, [], set())
    return found, best


def is_pod(
    candidate: MultiGraph,
    d: int,
    budget: int | None = None,
    *,
    options: SearchOptions | None = None,
    stop_early: bool = False,
) -> PodReport:
    """Check the pod property under every maximum matching on the degree-(d-2) set.

    Matching pairs may repeat existing edges, creating parallel classes.
    """
    degs = candidate.degrees()
    A = [v for v in candidate.vertices() if degs[v] == d - 2]
    B = [v for v in candidate.vertices() if degs[v] != d - 2]
    report = PodReport(d, A, B)
    _, packing = find_gadgets(candidate, d)
    report.gadgets = packing
    report.gadget_condition = (
        candidate.n == d + 1
        and candidate.is_simple()
        and min(degs, default=0) >= d - 2
        and len(A) <= d - 2
        and len(packing) >= 3
    )
    if candidate.n and min(degs) < d - 2:
        report.reason = f"minimum degree {min(degs)} below d - 2"
        return report
    if len(A) > d - 2:
        report.reason = f"{len(A)} vertices of degree d - 2 exceed d - 2"
        return report
    unknown = False
    for matching in maximum_matchings(A):
        report.matchings_checked += 1
        verdict = find_immersion(candidate.add_edges(matching), d, budget, options=options)
        report.per_matching.append((matching, verdict.outcome, verdict.nodes_explored))
        if verdict.outcome == IMMERSED and report.witness_matching is None:
            report.witness_matching = [list(p) for p in matching]
            report.witness_certificate = verdict.certificate
            if stop_early:
                break
        elif verdict.outcome == UNKNOWN:
            unknown = True
    if report.witness_matching is not None:
        report.reason = "K_d immersed after adding a maximum matching"
        return report
    if unknown:
        raise BudgetExceeded("pod search ran out of budget on some matching")
    report.is_pod = True
    report.reason = "no K_d immersion under any maximum matching"
    return report
