"""Hajós operations and a harness that tracks K_t immersions along sequences of them.

(alpha) adds vertices and/or edges; (beta) identifies two non-adjacent
vertices and deletes the parallel edges this creates; (gamma) splices two
graphs by deleting x1y1 and x2y2, adding y1y2 and identifying x1 with x2.
Alpha and gamma never simplify.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import AdjacentVertices, LoopForbidden, MissingEdge
from .immersion.search import IMMERSED, NOT_IMMERSED, SearchOptions, find_immersion
from .multigraph import MultiGraph, canon, complete_graph, disjoint_union


def apply_alpha(g: MultiGraph, new_vertices: int = 0, new_edges=()) -> MultiGraph:
    if new_vertices < 0:
        raise ValueError("cannot add a negative number of vertices")
    h = g.add_vertices(new_vertices) if new_vertices else g
    edges = list(new_edges)
    for u, v in edges:
        if u == v:
            raise LoopForbidden(f"edge ({u}, {v}) is a loop")
        if not (0 <= u < h.n and 0 <= v < h.n):
            raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
    return h.add_edges(edges) if edges else h


def _merge(g: MultiGraph, keep: int, drop: int, collapse: bool) -> MultiGraph:
    """Identify ``drop`` into ``keep``; later vertices shift down by one."""

    def pos(x):
        x = keep if x == drop else x
        return x - 1 if x > drop else x

    mult: dict[tuple[int, int], int] = {}
    for u, v, m in g.edges():
        key = canon(pos(u), pos(v))
        if key[0] == key[1]:
            raise LoopForbidden("identified vertices were adjacent")
        if collapse and key in mult:
            mult[key] = max(mult[key], m)
        else:
            mult[key] = mult.get(key, 0) + m
    labels = {pos(v): s for v, s in g.labels.items() if v != drop}
    return MultiGraph(g.n - 1, mult, labels)


def apply_beta(g: MultiGraph, u: int, v: int) -> MultiGraph:
    """Identify non-adjacent ``u`` and ``v``; the merged vertex keeps the smaller index."""
    if u == v:
        raise AdjacentVertices("cannot identify a vertex with itself")
    if g.has_edge(u, v):
        raise AdjacentVertices(f"vertices {u} and {v} are adjacent")
    keep, drop = min(u, v), max(u, v)
    return _merge(g, keep, drop, collapse=True)


def apply_gamma(g1: MultiGraph, x1y1, g2: MultiGraph, x2y2) -> MultiGraph:
    """Splice ``g1`` and ``g2``; ``g2`` vertices follow ``g1``'s, with x2 merged into x1."""
    x1, y1 = x1y1
    x2, y2 = x2y2
    if not g1.has_edge(x1, y1):
        raise MissingEdge(f"({x1}, {y1}) is not an edge of the first graph")
    if not g2.has_edge(x2, y2):
        raise MissingEdge(f"({x2}, {y2}) is not an edge of the second graph")
    union, offsets = disjoint_union(g1, g2)
    off = offsets[1]
    h = union.delete_edges([(x1, y1), (x2 + off, y2 + off)]).add_edges([(y1, y2 + off)])
    return _merge(h, x1, x2 + off, collapse=False)


@dataclass(frozen=True)
class HajosOp:
    """One operation; ``args`` holds the operation's parameters as plain data.

    alpha: {"vertices": int, "edges": [[u, v], ...]}
    beta: {"u": int, "v": int}
    gamma: {"other": edge list of g2 as [[u, v, m], ...], "n2": int, "x1y1": [x, y], "x2y2": [x, y]}
    """

    kind: str
    args: dict

    def apply(self, g: MultiGraph) -> MultiGraph:
        a = self.args
        if self.kind == "alpha":
            return apply_alpha(g, a.get("vertices", 0), [tuple(e) for e in a.get("edges", [])])
        if self.kind == "beta":
            return apply_beta(g, a["u"], a["v"])
        if self.kind == "gamma":
            g2 = MultiGraph(a["n2"], [tuple(e) for e in a["other"]])
            return apply_gamma(g, tuple(a["x1y1"]), g2, tuple(a["x2y2"]))
        raise ValueError(f"unknown operation kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "args": self.args}


@dataclass
class TrialReport:
    seed: int | None
    t: int
    ops: list[HajosOp]
    verdicts: list[str] = field(default_factory=list)  # verdicts[0] is the seed graph's
    sizes: list[int] = field(default_factory=list)
    flips: list[int] = field(default_factory=list)  # op indices where Immersed became NotImmersed
    non_beta_flips: list[int] = field(default_factory=list)

    @property
    def first_flip(self) -> int | None:
        return self.flips[0] if self.flips else None

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "t": self.t,
            "ops": [op.to_dict() for op in self.ops],
            "verdicts": self.verdicts,
            "sizes": self.sizes,
            "flip": self.first_flip,
            "flips": self.flips,
            "non_beta_flips": self.non_beta_flips,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _shift_corners(corners, op: HajosOp):
    """Carry corner indices across an operation that renumbers vertices."""
    if op.kind == "beta":
        drop = max(op.args["u"], op.args["v"])
        keep = min(op.args["u"], op.args["v"])
        out = [keep if c == drop else c - 1 if c > drop else c for c in corners]
        return out if len(set(out)) == len(out) else None
    return list(corners)


def preservation_trial(
    ops,
    seed_graph: MultiGraph,
    t: int,
    budget: int | None = None,
    *,
    seed: int | None = None,
    options: SearchOptions | None = None,
    strict: bool = True,
) -> TrialReport:
    """Apply ``ops`` in order, deciding K_t immersion after each step.

    With ``strict`` an AssertionError is raised when Immersed turns into
    NotImmersed at a step that is not beta.
    """
    ops = list(ops)
    report = TrialReport(seed, t, ops)
    g = seed_graph
    verdict = find_immersion(g, t, budget, options=options)
    report.verdicts.append(verdict.outcome)
    report.sizes.append(g.n)
    corners = verdict.certificate.corners if verdict.certificate else None
    for idx, op in enumerate(ops):
        g = op.apply(g)
        hint = _shift_corners(corners, op) if corners is not None else None
        verdict = find_immersion(g, t, budget, options=options, preferred_corners=hint)
        if report.verdicts[-1] == IMMERSED and verdict.outcome == NOT_IMMERSED:
            report.flips.append(idx)
            if op.kind != "beta":
                report.non_beta_flips.append(idx)
        report.verdicts.append(verdict.outcome)
        report.sizes.append(g.n)
        corners = verdict.certificate.corners if verdict.certificate else None
    if strict and report.non_beta_flips:
        raise AssertionError(f"immersion lost at non-beta steps {report.non_beta_flips}")
    return report


def random_ops(
    rng: random.Random,
    start: MultiGraph,
    length: int,
    kinds=("alpha", "gamma"),
    max_vertices: int = 24,
    partner: MultiGraph | None = None,
) -> list[HajosOp]:
    """A random valid operation sequence starting from ``start``.

    Gamma splices in ``partner`` (default: a copy of ``start``); growth stops
    at ``max_vertices``, after which only edge additions and identifications
    are drawn.
    """
    partner = partner if partner is not None else start
    g = start
    ops = []
    while len(ops) < length:
        kind = rng.choice(kinds)
        if kind == "gamma" and g.n + partner.n - 1 > max_vertices:
            kind = "alpha"
        op = None
        if kind == "alpha":
            room = max(0, min(2, max_vertices - g.n))
            nv = rng.randint(0, room)
            total = g.n + nv
            edges = []
            for _ in range(rng.randint(0 if nv else 1, 3)):
                u, v = rng.sample(range(total), 2) if total >= 2 else (0, 0)
                if u != v:
                    edges.append([u, v])
            op = HajosOp("alpha", {"vertices": nv, "edges": edges})
        elif kind == "beta":
            pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
            if pairs:
                u, v = rng.choice(pairs)
                op = HajosOp("beta", {"u": u, "v": v})
        else:
            e1 = rng.choice([(u, v) for u, v, _ in g.edges()])
            e2 = rng.choice([(u, v) for u, v, _ in partner.edges()])
            if rng.random() < 0.5:
                e1 = e1[::-1]
            if rng.random() < 0.5:
                e2 = e2[::-1]
            op = HajosOp(
                "gamma",
                {
                    "other": [[u, v, m] for u, v, m in partner.edges()],
                    "n2": partner.n,
                    "x1y1": list(e1),
                    "x2y2": list(e2),
                },
            )
        if op is not None:
            ops.append(op)
            g = op.apply(g)
    return ops


def random_trial(
    seed: int,
    k: int = 4,
    length: int = 6,
    kinds=("alpha", "gamma"),
    budget: int | None = None,
    max_vertices: int = 24,
    strict: bool = True,
) -> TrialReport:
    """Trial from the seed ``K_{k+1}`` with t = k + 1 and a seeded random sequence."""
    rng = random.Random(seed)
    start = complete_graph(k + 1)
    ops = random_ops(rng, start, length, kinds, max_vertices)
    return preservation_trial(ops, start, k + 1, budget, seed=seed, strict=strict)
