"""Closed-form counts and inequalities used by the constructions.

Everything here is exact integer or Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleParams


@dataclass(frozen=True)
class DevosParams:
    """Complement-of-regular-components family: n = d + D vertices split into t parts."""

    d: int
    D: int
    t: int
    n: int
    cycle_partition: tuple[int, ...]

    def __post_init__(self):
        if self.D < 1 or self.t < 1:
            raise InfeasibleParams("D and t must be positive")
        if 2 * self.t <= self.D * (self.D + 1):
            raise InfeasibleParams(f"need t > D(D+1)/2, got t={self.t}, D={self.D}")
        if self.n != self.d + self.D:
            raise InfeasibleParams("n must equal d + D")
        if len(self.cycle_partition) != self.t or sum(self.cycle_partition) != self.n:
            raise InfeasibleParams("partition must have t parts summing to n")
        if any(p < self.D + 1 for p in self.cycle_partition):
            raise InfeasibleParams("every part needs at least D + 1 vertices")

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "t": self.t,
            "n": self.n,
            "cycle_partition": list(self.cycle_partition),
        }


def devos_degree_floor(D: int) -> Fraction:
    """Smallest d admitting the family for this D: D^3/2 + D^2 + D/2 + 1."""
    return Fraction(D**3, 2) + D * D + Fraction(D, 2) + 1


def _odd_partitions(total: int, parts: int, smallest: int):
    """Non-decreasing tuples of ``parts`` odd integers >= ``smallest`` summing to ``total``."""
    if smallest % 2 == 0:
        smallest += 1
    if parts == 0:
        if total == 0:
            yield ()
        return
    p = smallest
    while p * parts <= total:
        for rest in _odd_partitions(total - p, parts - 1, p):
            yield (p,) + rest
        p += 2


def devos_feasible_params(d: int) -> list[DevosParams]:
    """All (D, t, part sizes) giving a min-degree d-1 example for this d.

    Components are taken to be odd-order D-regular graphs with even D (odd
    cycles when D = 2, which are class two because they are overfull); odd D
    would need snark-like components and is not enumerated.
    """
    if d < 2:
        raise InfeasibleParams("d must be at least 2")
    out = []
    D = 2
    while devos_degree_floor(D) <= d:
        if D % 2 == 0:
            n = d + D
            t = D * (D + 1) // 2 + 1
            while t * (D + 1) <= n:
                for part in _odd_partitions(n, t, D + 1):
                    out.append(DevosParams(d, D, t, n, part))
                t += 1
        D += 1
    return out


def devos_chromatic_bound(params: DevosParams) -> int:
    """Upper bound n - tD on the chromatic number of the complement graph."""
    return params.n - params.t * params.D


def mk_vertex_count(d: int, b: int, p: int) -> int:
    """Vertices of the (d-2)-connected family with b bays and p pods per dock vertex."""
    if d < 9 or b < 1 or p < 1:
        raise InfeasibleParams("need d >= 9, b >= 1, p >= 1")
    return (d - 2) * b * (1 + (d + 1) * p)


def conjecture_fraction(graph_size: int, m: int, d: int) -> Fraction:
    """Threshold |V| / (1 + m(d+1)) on the number of high-degree vertices."""
    if m < 1 or d < 8:
        raise InfeasibleParams("need m >= 1 and d >= 8")
    return Fraction(graph_size, 1 + m * (d + 1))


def corner_split_polynomial(d: int, x: int) -> int:
    """-x^2 + dx + 2 - d: positive means x corners against d - x cannot cross d - 2 edges."""
    return -x * x + d * x + 2 - d


def dock_case_polynomial(d: int, k: int) -> int:
    """-k^2 + dk - 2d + 6, i.e. k(d-k) - 2(d-3)."""
    return -k * k + d * k - 2 * d + 6


def wiring_cut(d: int) -> int:
    """Edges between consecutive bays in the standard dock wiring."""
    return -(-(d - 2) // 2)


def inequality_table(d: int) -> dict:
    """Evaluations of the counting inequalities for one d (used by ``analyze``)."""
    return {
        "d": d,
        "corner_split": {x: corner_split_polynomial(d, x) for x in range(1, d)},
        "dock_case": {k: dock_case_polynomial(d, k) for k in range(2, d - 1)},
        "wiring_cut": wiring_cut(d),
        "wiring_bound": d - 3,
        "devos_degree_floor": {D: str(devos_degree_floor(D)) for D in range(2, 6)},
    }
