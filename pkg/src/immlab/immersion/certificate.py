"""Immersion certificates: a corner injection plus an edge-disjoint path system."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from ..multigraph import MultiGraph, canon

EdgeInstance = tuple[int, int, int]  # (u, v, parallel index) with u < v


@dataclass(frozen=True)
class ImmersionCertificate:
    t: int
    corners: tuple[int, ...]
    paths: dict[tuple[int, int], tuple[EdgeInstance, ...]] = field(default_factory=dict)

    def vertex_path(self, i: int, j: int) -> list[int]:
        """Vertices visited by the path joining corner ``i`` to corner ``j``."""
        if i > j:
            return self.vertex_path(j, i)[::-1]
        walk = [self.corners[i]]
        for u, v, _ in self.paths[(i, j)]:
            walk.append(v if walk[-1] == u else u)
        return walk

    def pegs(self) -> set[int]:
        out = set()
        for i, j in self.paths:
            out.update(self.vertex_path(i, j)[1:-1])
        return out

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "corners": list(self.corners),
            "paths": [
                {"pair": [i, j], "edges": [list(e) for e in self.paths[(i, j)]]}
                for i, j in sorted(self.paths)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> ImmersionCertificate:
        paths = {
            tuple(p["pair"]): tuple(tuple(e) for e in p["edges"]) for p in data["paths"]
        }
        return cls(int(data["t"]), tuple(data["corners"]), paths)

    @classmethod
    def from_vertex_paths(
        cls, g: MultiGraph, corners, vertex_paths: dict[tuple[int, int], list[int]]
    ) -> ImmersionCertificate:
        """Assign parallel-edge indices to vertex sequences, first come first served."""
        taken: Counter = Counter()
        paths = {}
        for (i, j) in sorted(vertex_paths):
            seq = vertex_paths[(i, j)]
            if seq[0] != corners[i]:
                seq = seq[::-1]
            edges = []
            for a, b in zip(seq, seq[1:]):
                key = canon(a, b)
                edges.append((key[0], key[1], taken[key]))
                taken[key] += 1
            paths[(i, j)] = tuple(edges)
        return cls(len(corners), tuple(corners), paths)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = "ok"
    detail: str = ""

    def __bool__(self):
        return self.ok


def verify_certificate(g: MultiGraph, cert: ImmersionCertificate) -> CertificateCheck:
    """Check a certificate against ``g`` from scratch."""
    t = cert.t
    corners = cert.corners
    if t < 1 or len(corners) != t:
        return CertificateCheck(False, "bad_corners", "corner count differs from t")
    if len(set(corners)) != t or any(not 0 <= c < g.n for c in corners):
        return CertificateCheck(False, "bad_corners", "corners not an injection into V(g)")
    expected = set(combinations(range(t), 2))
    if set(cert.paths) != expected:
        missing = sorted(expected - set(cert.paths))
        return CertificateCheck(False, "missing_pair", f"pairs {missing[:5]} absent")
    used: set[EdgeInstance] = set()
    for (i, j), edges in sorted(cert.paths.items()):
        if not edges:
            return CertificateCheck(False, "broken_walk", f"empty path for pair {(i, j)}")
        at = corners[i]
        seen = {at}
        for e in edges:
            u, v, k = e
            if u >= v or k < 0 or k >= g.multiplicity(u, v):
                return CertificateCheck(False, "missing_edge", f"edge instance {e} not in graph")
            if e in used:
                return CertificateCheck(False, "edge_reuse", f"edge instance {e} used twice")
            used.add(e)
            if at == u:
                at = v
            elif at == v:
                at = u
            else:
                return CertificateCheck(False, "broken_walk", f"pair {(i, j)} jumps at {e}")
            if at in seen:
                return CertificateCheck(False, "repeated_vertex", f"pair {(i, j)} revisits {at}")
            seen.add(at)
        if at != corners[j]:
            return CertificateCheck(False, "wrong_endpoint", f"pair {(i, j)} ends at {at}")
    return CertificateCheck(True)
