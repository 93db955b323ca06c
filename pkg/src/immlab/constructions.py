"""Generators for pods, docks and the assembled families of K_d-immersion-free graphs.

Vertex layout of an assembled graph: dock vertices first, bay by bay
(``a^i_j`` is vertex ``i * bay_size + j - 1``), then the pods in attachment
order, each occupying a contiguous block of ``d + 1`` vertices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import CrossBayAttachment, InfeasibleParams, NotFull
from .multigraph import MultiGraph, complete_graph, cycle_graph, delete_edges, disjoint_union

FAMILIES = (
    "P8",
    "Pd",
    "P5d",
    "Pkd",
    "Special10Pod",
    "Gd",
    "Gnd",
    "H5d",
    "Mkd",
    "Special10Graph",
    "Seymour10",
    "DevosFamily",
    "HajosSeed",
)
POD_FAMILIES = ("P8", "Pd", "P5d", "Pkd", "Special10Pod")
ATTACHMENTS = ("concentrated", "round_robin", "explicit")


@dataclass
class ConstructionParams:
    family: str
    d: int = 8
    n_bays: int = 1
    k: int | None = None
    pods_per_bay: int | None = None  # None: fewest pods that make the bay full
    pods_per_vertex: int | None = None  # concentrated attachment only
    attachment: str | None = None  # None: round_robin for Special10Graph, else concentrated
    explicit: dict | None = None  # pod index -> list of dock targets
    devos_D: int = 2
    devos_cycles: list[int] | None = None
    devos_components: list[MultiGraph] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InfeasibleParams(f"unknown family {self.family!r}")
        if self.attachment is None:
            self.attachment = "round_robin" if self.family == "Special10Graph" else "concentrated"
        if self.attachment not in ATTACHMENTS:
            raise InfeasibleParams(f"unknown attachment strategy {self.attachment!r}")
        if self.n_bays < 1:
            raise InfeasibleParams("need at least one bay")
        if self.family in POD_FAMILIES + ("Gd", "Gnd", "H5d") and self.d < 8:
            raise InfeasibleParams("pod families need d >= 8")
        if self.family in ("Pkd", "Mkd"):
            if self.k is None:
                raise InfeasibleParams("Pkd/Mkd need k")
            if self.d < 9 or not 7 <= self.k <= self.d - 2:
                raise InfeasibleParams("Pkd needs d >= 9 and 7 <= k <= d - 2")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "n_bays": self.n_bays,
            "k": self.k,
            "pods_per_bay": self.pods_per_bay,
            "pods_per_vertex": self.pods_per_vertex,
            "attachment": self.attachment,
            "explicit": self.explicit,
            "devos_D": self.devos_D,
            "devos_cycles": self.devos_cycles,
        }


@dataclass
class LabeledGraph:
    graph: MultiGraph
    d: int
    family: str = ""
    bay_of: dict[int, int] = field(default_factory=dict)
    pod_of: dict[int, int] = field(default_factory=dict)
    bay_coordinate: dict[int, tuple[int, int]] = field(default_factory=dict)
    attach: dict[int, list[int]] = field(default_factory=dict)  # pod -> its attaching vertices
    n_bays: int = 0

    @property
    def bays(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_bays)]
        for v, b in sorted(self.bay_of.items()):
            out[b].append(v)
        return out

    @property
    def pods(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for v, p in sorted(self.pod_of.items()):
            out.setdefault(p, []).append(v)
        return [out[p] for p in sorted(out)]

    def pod_bay(self, pod: int) -> int | None:
        """Bay that a pod hangs from, read off its edges."""
        members = set(self.pods[pod])
        bays = set()
        for v in members:
            for w in self.graph.neighbors(v):
                if w not in members and w in self.bay_of:
                    bays.add(self.bay_of[w])
        return bays.pop() if len(bays) == 1 else None

    def decomposition(self) -> dict:
        return {"pods": self.pods, "bays": self.bays}

    def metadata(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "n_bays": self.n_bays,
            "bay_of": {str(v): b for v, b in sorted(self.bay_of.items())},
            "pod_of": {str(v): p for v, p in sorted(self.pod_of.items())},
            "bay_coordinate": {str(v): list(c) for v, c in sorted(self.bay_coordinate.items())},
            "attach": {str(p): vs for p, vs in sorted(self.attach.items())},
        }

    def metadata_json(self) -> str:
        return json.dumps(self.metadata(), sort_keys=True, indent=1)

    @classmethod
    def from_metadata(cls, graph: MultiGraph, meta: dict) -> LabeledGraph:
        return cls(
            graph=graph,
            d=meta["d"],
            family=meta.get("family", ""),
            bay_of={int(v): b for v, b in meta["bay_of"].items()},
            pod_of={int(v): p for v, p in meta["pod_of"].items()},
            bay_coordinate={int(v): tuple(c) for v, c in meta["bay_coordinate"].items()},
            attach={int(p): vs for p, vs in meta.get("attach", {}).items()},
            n_bays=meta["n_bays"],
        )


# -- pods ------------------------------------------------------------------


def _path2(a, b, c):
    return [(a, b), (b, c)]


def _cycle(vs):
    return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _matching_from_top(vs):
    """Pairs of a maximum matching on ``vs``, highest indices first."""
    top = sorted(vs, reverse=True)
    return [(top[i], top[i + 1]) for i in range(0, len(top) - 1, 2)]


def pod_removals(family: str, d: int, k: int | None = None) -> tuple[list, list[int]]:
    """Missing edges of a pod inside ``K_{d+1}`` and its attaching vertex set."""
    n = d + 1
    structures: list[list[tuple[int, int]]] = []
    nxt = 0

    def take(size):
        nonlocal nxt
        vs = list(range(nxt, nxt + size))
        nxt += size
        if nxt > n:
            raise InfeasibleParams(f"{family} removals need {nxt} vertices, K_{n} has {n}")
        return vs

    extra_attach: list[int] = []
    if family in ("P8", "Pd"):
        for _ in range(3):
            structures.append(_path2(*take(3)))
    elif family == "P5d":
        for _ in range(2):
            structures.append(_path2(*take(3)))
        structures.append(_cycle(take(3)))
    elif family == "Pkd":
        if k % 2:
            structures.append(_path2(*take(3)))
            structures.append(_cycle(take(3)))
            structures.append(_cycle(take(k - 4)))
        else:
            if k < 10:
                raise InfeasibleParams("even k below 10 has no pod of this shape")
            for _ in range(3):
                structures.append(_cycle(take(3)))
            if k - 9 == 1:
                structures.append(_path2(*take(3)))
            else:
                structures.append(_cycle(take(k - 9)))
    elif family == "Special10Pod":
        if d != 10:
            raise InfeasibleParams("the special pod exists for d = 10 only")
        structures.append(_cycle(take(3)))
        structures.append(_cycle(take(3)))
        edge = take(2)
        structures.append([tuple(edge)])
        structures.append(_path2(*take(3)))
        extra_attach.append(edge[0])
    else:
        raise InfeasibleParams(f"{family} is not a pod family")
    missing = [e for s in structures for e in s]
    if family != "Special10Pod":
        missing += _matching_from_top(range(nxt, n))
    deg = [n - 1] * n
    for u, v in missing:
        deg[u] -= 1
        deg[v] -= 1
    attach = sorted({v for v in range(n) if deg[v] == d - 2} | set(extra_attach))
    return missing, attach


def build_pod(params: ConstructionParams) -> LabeledGraph:
    family = params.family
    d = 8 if family == "P8" else params.d
    if family == "P8" and params.d != 8:
        raise InfeasibleParams("P8 is the d = 8 pod")
    missing, attach = pod_removals(family, d, params.k)
    g = delete_edges(complete_graph(d + 1), missing)
    g = g.with_labels({v: f"p0_{v}" for v in g.vertices()})
    return LabeledGraph(g, d, family, pod_of={v: 0 for v in g.vertices()}, attach={0: attach})


# -- docks -----------------------------------------------------------------


def build_dock(d: int, n_bays: int, bay_size: int) -> LabeledGraph:
    if bay_size > d - 2:
        raise InfeasibleParams(f"bay of {bay_size} vertices exceeds d - 2 = {d - 2}")
    if n_bays < 1 or bay_size < 1:
        raise InfeasibleParams("need a positive number of non-empty bays")
    half = math.ceil((d - 2) / 2)

    def a(i, j):
        return (i % n_bays) * bay_size + j - 1

    pairs = set()
    for i in range(n_bays):
        for u, v in combinations(range(1, bay_size + 1), 2):
            pairs.add((a(i, u), a(i, v)))
    if n_bays > 1:
        if d - 1 - 1 > bay_size:
            raise InfeasibleParams("bay wiring needs bays of d - 2 vertices")
        for i in range(n_bays):
            for j in range(1, half + 1):
                u, v = a(i, j), a(i - 1, d - 1 - j)
                pairs.add((min(u, v), max(u, v)))
    n = n_bays * bay_size
    labels = {a(i, j): f"a{i}_{j}" for i in range(n_bays) for j in range(1, bay_size + 1)}
    g = MultiGraph(n, sorted(pairs), labels)
    return LabeledGraph(
        g,
        d,
        "dock",
        bay_of={a(i, j): i for i in range(n_bays) for j in range(1, bay_size + 1)},
        bay_coordinate={a(i, j): (i, j) for i in range(n_bays) for j in range(1, bay_size + 1)},
        n_bays=n_bays,
    )


# -- attaching pods ---------------------------------------------------------


def attach_pods(dock: LabeledGraph, pods: list[LabeledGraph], targets: list[list[int]]) -> LabeledGraph:
    """Glue ``pods[i]`` to the dock, joining its attaching vertices to ``targets[i]``.

    Raises :class:`NotFull` unless every bay vertex ends with degree >= d - 1.
    """
    d = dock.d
    if len(pods) != len(targets):
        raise ValueError("one target list per pod")
    graphs = [dock.graph] + [p.graph for p in pods]
    union, offsets = disjoint_union(*graphs)
    new_edges = []
    pod_of = {}
    attach = {}
    for idx, (pod, tgt) in enumerate(zip(pods, targets)):
        att = pod.attach[0]
        if len(tgt) != len(att):
            raise ValueError(f"pod {idx}: {len(att)} attaching vertices but {len(tgt)} targets")
        bays = {dock.bay_of[x] for x in tgt}
        if len(bays) > 1:
            raise CrossBayAttachment(f"pod {idx} touches bays {sorted(bays)}")
        off = offsets[idx + 1]
        for v in pod.graph.vertices():
            pod_of[v + off] = idx
        attach[idx] = [v + off for v in att]
        new_edges += [(v + off, x) for v, x in zip(att, tgt)]
    labels = dict(dock.graph.labels)
    for idx in range(len(pods)):
        off = offsets[idx + 1]
        for v in pods[idx].graph.vertices():
            labels[v + off] = f"p{idx}_{v}"
    g = union.add_edges(new_edges).with_labels(labels)
    short = [v for v in dock.bay_of if g.degree(v) < d - 1]
    if short:
        raise NotFull(short)
    return LabeledGraph(
        g,
        d,
        dock.family,
        bay_of=dict(dock.bay_of),
        pod_of=pod_of,
        bay_coordinate=dict(dock.bay_coordinate),
        attach=attach,
        n_bays=dock.n_bays,
    )


def plan_attachment(dock: LabeledGraph, attach_size: int, params: ConstructionParams) -> list[list[int]]:
    """Dock targets for each pod under the chosen strategy."""
    d = dock.d
    g = dock.graph
    deficit = {v: max(0, d - 1 - g.degree(v)) for v in dock.bay_of}
    plans: list[list[int]] = []
    if params.attachment == "explicit":
        if not params.explicit:
            raise InfeasibleParams("explicit attachment needs a target map")
        return [list(params.explicit[key]) for key in sorted(params.explicit, key=int)]
    for bay in dock.bays:
        if params.attachment == "concentrated":
            for v in bay:
                if params.pods_per_vertex is not None:
                    count = params.pods_per_vertex
                else:
                    count = math.ceil(deficit[v] / attach_size)
                plans += [[v] * attach_size for _ in range(count)]
        else:
            need = sum(deficit[v] for v in bay)
            count = params.pods_per_bay
            if count is None:
                count = math.ceil(need / attach_size)
            slots = []
            layer = 0
            while len(slots) < need:
                slots += [v for v in bay if deficit[v] > layer]
                layer += 1
            while len(slots) < count * attach_size:
                slots += bay
            slots = slots[: count * attach_size]
            plans += [slots[i * attach_size:(i + 1) * attach_size] for i in range(count)]
    return plans


# -- assembled families ------------------------------------------------------


def _pod_params_for(params: ConstructionParams) -> ConstructionParams:
    fam = params.family
    if fam in ("Gd", "Gnd"):
        return ConstructionParams("Pd", d=params.d)
    if fam == "H5d":
        return ConstructionParams("P5d", d=params.d)
    if fam == "Mkd":
        if params.d == 10 and params.k == 8:
            return ConstructionParams("Special10Pod", d=10)
        return ConstructionParams("Pkd", d=params.d, k=params.k)
    if fam == "Special10Graph":
        return ConstructionParams("Special10Pod", d=10)
    raise InfeasibleParams(f"{fam} has no pods")


def build_docked(params: ConstructionParams) -> LabeledGraph:
    d = params.d
    if params.family == "Gd":
        dock = build_dock(d, 1, d - 3)
    else:
        dock = build_dock(d, params.n_bays, d - 2)
    pod = build_pod(_pod_params_for(params))
    size = len(pod.attach[0])
    targets = plan_attachment(dock, size, params)
    out = attach_pods(dock, [pod] * len(targets), targets)
    out.family = params.family
    return out


def devos_graph(components: list[MultiGraph], D: int) -> MultiGraph:
    """Complement of the disjoint union of D-regular class-2 components."""
    if len(components) <= D * (D + 1) / 2:
        raise InfeasibleParams(f"need more than {D * (D + 1) // 2} components")
    for h in components:
        if not h.is_simple() or any(h.degree(v) != D for v in h.vertices()):
            raise InfeasibleParams("components must be simple and D-regular")
        if not is_class_two(h, D):
            raise InfeasibleParams("component is D-edge-colourable (class 1)")
    union, _ = disjoint_union(*components)
    n = union.n
    return MultiGraph(n, [(u, v) for u, v in combinations(range(n), 2) if not union.has_edge(u, v)])


def is_class_two(h: MultiGraph, D: int) -> bool:
    """True when the edges of ``h`` cannot be properly coloured with D colours."""
    from .metrics import chromatic_number

    if h.n > 12:
        raise InfeasibleParams("class-2 check limited to components of at most 12 vertices")
    edges = [(u, v) for u, v, _ in h.edges()]
    line = MultiGraph(
        len(edges),
        [(i, j) for i, j in combinations(range(len(edges)), 2) if set(edges[i]) & set(edges[j])],
    )
    return chromatic_number(line) > D


def build_family(params: ConstructionParams) -> LabeledGraph:
    fam = params.family
    if fam in POD_FAMILIES:
        return build_pod(params)
    if fam in ("Gd", "Gnd", "H5d", "Mkd", "Special10Graph"):
        if fam == "Special10Graph" and params.d != 10:
            raise InfeasibleParams("the special graph is defined for d = 10")
        if fam == "Gd" and params.n_bays != 1:
            raise InfeasibleParams("G_d has a single bay")
        return build_docked(params)
    if fam == "Seymour10":
        g = devos_graph([cycle_graph(3)] * 4, 2)
        return LabeledGraph(g, 10, fam)
    if fam == "DevosFamily":
        D = params.devos_D
        if params.devos_components is not None:
            comps = list(params.devos_components)
        else:
            cycles = params.devos_cycles or []
            if D != 2:
                raise InfeasibleParams("cycle lengths describe D = 2 only; pass components")
            if any(c < 3 or c % 2 == 0 for c in cycles):
                raise InfeasibleParams("cycle lengths must be odd and at least 3")
            comps = [cycle_graph(c) for c in cycles]
        g = devos_graph(comps, D)
        return LabeledGraph(g, g.n - D, fam)
    if fam == "HajosSeed":
        return LabeledGraph(complete_graph(params.d), params.d, fam)
    raise InfeasibleParams(f"unsupported family {fam}")
