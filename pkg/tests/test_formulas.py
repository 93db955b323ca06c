from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from immlab.constructions import ConstructionParams, build_family
from immlab.errors import InfeasibleParams
from immlab.formulas import (
    DevosParams,
    conjecture_fraction,
    corner_split_polynomial,
    devos_chromatic_bound,
    devos_degree_floor,
    devos_feasible_params,
    dock_case_polynomial,
    inequality_table,
    mk_vertex_count,
    wiring_cut,
)
from immlab.immersion import corner_split_infeasible
from immlab.metrics import chromatic_number, min_degree


def test_devos_small_d():
    assert devos_feasible_params(8) == []
    assert devos_feasible_params(11) == []
    ten = devos_feasible_params(10)
    assert [(p.D, p.t, p.cycle_partition) for p in ten] == [(2, 4, (3, 3, 3, 3))]
    assert [p.cycle_partition for p in devos_feasible_params(12)] == [(3, 3, 3, 5)]


def test_degree_floor():
    assert devos_degree_floor(2) == 10
    assert devos_degree_floor(3) == 25
    assert devos_degree_floor(4) == 51


def test_feasible_params_satisfy_invariants():
    for d in range(2, 41):
        for p in devos_feasible_params(d):
            assert 2 * p.t > p.D * (p.D + 1)
            assert p.n == d + p.D >= (p.D + 1) * p.t
            assert all(x % 2 == 1 and x >= p.D + 1 for x in p.cycle_partition)
            assert d >= devos_degree_floor(p.D)


def test_chromatic_bound():
    assert devos_chromatic_bound(DevosParams(10, 2, 4, 12, (3, 3, 3, 3))) == 4
    assert devos_chromatic_bound(DevosParams(13, 2, 5, 15, (3, 3, 3, 3, 3))) == 5
    with pytest.raises(InfeasibleParams):
        DevosParams(10, 2, 0, 12, ())
    with pytest.raises(InfeasibleParams):
        DevosParams(10, 2, 3, 12, (3, 3, 6))


def test_devos_instances_meet_their_bounds():
    for d in (10, 12, 14):
        for p in devos_feasible_params(d):
            g = build_family(ConstructionParams("DevosFamily", devos_cycles=list(p.cycle_partition))).graph
            assert min_degree(g) == p.n - 1 - p.D
            assert chromatic_number(g) <= devos_chromatic_bound(p)


def test_vertex_count_formula():
    assert mk_vertex_count(9, 1, 1) == 77
    assert mk_vertex_count(9, 2, 1) == 154
    assert mk_vertex_count(10, 1, 2) == 184
    with pytest.raises(InfeasibleParams):
        mk_vertex_count(8, 1, 1)


def test_conjecture_fraction():
    assert conjecture_fraction(77, 1, 9) == 7
    assert conjecture_fraction(154, 1, 9) == 14
    assert conjecture_fraction(10, 2, 8) == Fraction(10, 19)


@given(st.integers(1, 10**6), st.integers(1, 5), st.integers(8, 40))
def test_conjecture_fraction_is_linear(x, m, d):
    assert conjecture_fraction(2 * x, m, d) == 2 * conjecture_fraction(x, m, d)


def test_counting_inequalities():
    for d in range(8, 21):
        assert all(corner_split_polynomial(d, x) > 0 for x in range(1, d))
        assert corner_split_infeasible(d, d - 2)
        assert all(dock_case_polynomial(d, k) > 0 for k in range(2, d - 1))
        assert all(k * (d - k) > 2 * (d - 3) for k in range(2, d - 1))
    for d in range(4, 60):
        assert wiring_cut(d) <= d - 3


def test_inequality_table_shape():
    table = inequality_table(9)
    assert table["wiring_cut"] == 4 and table["wiring_bound"] == 6
    assert sorted(table["corner_split"]) == list(range(1, 9))
    assert sorted(table["dock_case"]) == list(range(2, 8))
