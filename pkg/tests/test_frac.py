import random
from fractions import Fraction

import pytest

from ftpath.core import BadParameters, Infeasible, build_instance, enumerate_scenarios
from ftpath.frac import (TooLargeForExactLP, fractional_max_flow, gap_family,
                         gap_report, rounding_vector, solve_frac,
                         enumerate_cut_edge_sets)
from ftpath.oracle import brute_force_opt
from ftpath.shortest import shortest_path_solution
from ftpath.simplex import (EQUAL, GREATER_EQUAL, LESS_EQUAL, LPInfeasible,
                            LPUnbounded, solve_lp)

from conftest import random_instance


def test_simplex_basic():
    # min x0 + x1  s.t.  x0 + x1 >= 2, x0 - x1 == 0
    x, value = solve_lp([1, 1],
                        [({0: 1, 1: 1}, GREATER_EQUAL, 2),
                         ({0: 1, 1: -1}, EQUAL, 0)], 2)
    assert value == 2
    assert x == [Fraction(1), Fraction(1)]


def test_simplex_infeasible_and_unbounded():
    with pytest.raises(LPInfeasible):
        solve_lp([1], [({0: 1}, LESS_EQUAL, -1)], 1)
    with pytest.raises(LPUnbounded):
        solve_lp([-1], [({0: -1}, LESS_EQUAL, 0)], 1)


def test_simplex_degenerate_redundant_rows():
    x, value = solve_lp([2, 3],
                        [({0: 1, 1: 1}, EQUAL, 1),
                         ({0: 2, 1: 2}, EQUAL, 2),
                         ({0: 1}, LESS_EQUAL, 1)], 2)
    assert value == 2
    assert x == [Fraction(1), Fraction(0)]


def test_gap_family_values_exact():
    cv = solve_frac(gap_family(4, 1))
    assert cv.value == Fraction(4, 3)
    assert cv.x == (Fraction(1, 3),) * 4

    assert solve_frac(gap_family(2, 1)).value == Fraction(2)
    assert solve_frac(gap_family(10, 2)).value == Fraction(10, 8)


def test_gap_family_parameters():
    with pytest.raises(BadParameters):
        gap_family(1, 1)
    with pytest.raises(BadParameters):
        gap_family(3, -1)
    inst = gap_family(2, 1)
    assert len(inst.edges) == 2 and all(e.faulty for e in inst.edges)


def test_no_faulty_edges_reduces_to_shortest_path():
    inst = build_instance(False, 4, 0, 3, 2,
                          [(0, 1, 2, False), (1, 3, 2, False), (0, 3, 7, False),
                           (1, 2, 1, False), (2, 3, 5, False)])
    cv = solve_frac(inst)
    sp = shortest_path_solution(inst)
    assert cv.value == sp.cost
    assert all(x in (0, 1) for x in cv.x)
    assert frozenset(e.id for e in inst.edges if cv.x[e.id] == 1) == sp.edges


def test_solution_feasible_per_scenario():
    rng = random.Random(211)
    for _ in range(50):
        inst = random_instance(rng, n_max=5, m_max=8, k=rng.randint(0, 2))
        try:
            cv = solve_frac(inst)
        except Infeasible:
            continue
        for scenario in enumerate_scenarios(inst):
            assert fractional_max_flow(inst, cv.x, scenario.failed) >= 1


def test_sandwich_against_integral_optimum():
    rng = random.Random(223)
    checked = 0
    for _ in range(120):
        inst = random_instance(rng, n_max=5, m_max=8, k=rng.randint(0, 2))
        result = brute_force_opt(inst)
        if result.best is None:
            with pytest.raises(Infeasible):
                solve_frac(inst)
            continue
        cv = solve_frac(inst)
        assert cv.value <= result.best.cost
        assert (inst.k + 1) * cv.value >= result.best.cost
        checked += 1
    assert checked >= 50


def test_rounding_vector_gap_family():
    inst = gap_family(4, 1)
    cv = solve_frac(inst)
    y = rounding_vector(cv, inst)
    assert y == (Fraction(2, 3),) * 4
    assert sum(y) >= 2  # the only cut carries at least k+1


def test_rounding_vector_integral_input():
    inst = build_instance(False, 3, 0, 2, 2,
                          [(0, 1, 1, False), (1, 2, 1, True), (0, 2, 1, True)])
    from ftpath.frac import CapacityVector
    x = CapacityVector((Fraction(1), Fraction(0), Fraction(1)), Fraction(2))
    y = rounding_vector(x, inst)
    assert y == (Fraction(3), Fraction(0), Fraction(1))


def test_rounded_cuts_carry_k_plus_one():
    rng = random.Random(227)
    checked = 0
    for _ in range(160):
        inst = random_instance(rng, n_max=5, m_max=8, k=rng.randint(0, 2))
        try:
            cv = solve_frac(inst)
        except Infeasible:
            continue
        y = rounding_vector(cv, inst)
        for cut in enumerate_cut_edge_sets(inst):
            assert sum(y[e] for e in cut) >= inst.k + 1
            checked += 1
    assert checked >= 60


def test_zero_budget_family_and_degenerate_terminals():
    zero = gap_family(5, 0)
    assert solve_frac(zero).value == 1
    same = build_instance(False, 2, 0, 0, 2, [(0, 1, 3, True)])
    assert solve_frac(same).value == 0


def test_gap_report_known_points():
    r = gap_report(2, 1)
    assert (r.integral_opt, r.fractional_opt, r.ratio) == (2, Fraction(2), Fraction(1))
    r = gap_report(4, 1)
    assert (r.integral_opt, r.fractional_opt, r.ratio) == \
        (2, Fraction(4, 3), Fraction(3, 2))
    r = gap_report(10, 2)
    assert (r.integral_opt, r.fractional_opt, r.ratio) == \
        (3, Fraction(5, 4), Fraction(12, 5))


def test_gap_ratio_closed_form_and_monotone():
    previous = None
    for d in (3, 5, 8, 12):
        k = 2
        r = gap_report(d, k)
        assert r.ratio == Fraction((k + 1) * (d - k), d)
        assert 1 <= r.ratio <= k + 1
        if previous is not None:
            assert r.ratio > previous
        previous = r.ratio


def _scenario_flow_lp_value(inst):
    """Independent formulation: one unit-value flow per failure scenario.

    Variables are the capacities x plus per-scenario arc flows bounded
    by x; minimizes the same objective.  Exponential in the scenario
    count, so only for tiny instances.
    """
    m = len(inst.edges)
    arcs = []
    for e in inst.edges:
        if e.u == e.v:
            continue
        arcs.append((e.u, e.v, e.id))
        if not inst.directed:
            arcs.append((e.v, e.u, e.id))
    rows = []
    num_vars = m
    for e in inst.edges:
        rows.append(({e.id: 1}, LESS_EQUAL, 1))
    for scenario in enumerate_scenarios(inst):
        flow_var = {}
        for a, (u, v, eid) in enumerate(arcs):
            if eid in scenario.failed:
                continue
            flow_var[a] = num_vars
            num_vars += 1
            rows.append(({flow_var[a]: 1, eid: -1}, LESS_EQUAL, 0))
        for vertex in range(inst.vertex_count):
            if vertex == inst.t:
                continue
            balance = {}
            for a, (u, v, eid) in enumerate(arcs):
                if a not in flow_var:
                    continue
                if u == vertex:
                    balance[flow_var[a]] = balance.get(flow_var[a], 0) + 1
                if v == vertex:
                    balance[flow_var[a]] = balance.get(flow_var[a], 0) - 1
            rows.append((balance, EQUAL, 1 if vertex == inst.s else 0))
    objective = {e.id: e.w for e in inst.edges}
    x, value = solve_lp(objective, rows, num_vars)
    return value


def test_cut_formulation_matches_scenario_flow_formulation():
    rng = random.Random(229)
    agreed = 0
    while agreed < 25:
        inst = random_instance(rng, n_max=4, m_max=6, k=rng.randint(0, 2))
        if len(inst.faulty_ids) > 4 or inst.s == inst.t:
            continue
        try:
            cv = solve_frac(inst)
        except Infeasible:
            continue
        assert cv.value == _scenario_flow_lp_value(inst)
        agreed += 1


def test_infeasible_instance():
    inst = build_instance(True, 2, 0, 1, 1, [(0, 1, 1, True)])
    with pytest.raises(Infeasible):
        solve_frac(inst)


def test_var_cap():
    with pytest.raises(TooLargeForExactLP):
        solve_frac(gap_family(30, 2), var_cap=20)
