from fractions import Fraction

import pytest

from kamrfp.attack import worst_case
from kamrfp.instances import parallel_example
from kamrfp.maxflow import max_flow
from kamrfp.model import (
    COMBINED,
    TWO_PHASE,
    ModelTooLarge,
    ScenarioIndex,
    build_model,
    solve_kamrfp,
    variable_count,
)
from kamrfp.network import Arc, Network, check_flow, parse_network
from kamrfp.simplex import solve_lp


def test_scenario_index_is_lexicographic():
    idx = ScenarioIndex(4, 2)
    assert list(idx) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert idx.index({4, 2}) == 4 and idx[4] == (2, 4)
    with pytest.raises(ValueError):
        ScenarioIndex(3, 4)


def test_model_size_parallel_example(b4):
    lp, mp = build_model(b4, 1, TWO_PHASE, Fraction(4))
    # 7 flow variables + theta + 6 scenarios x 6 surviving arcs (dummy included)
    assert lp.num_vars == mp.num_vars == 44 == variable_count(6, 1)
    assert len(mp.rows["scenario_conservation"]) == 18
    assert len(mp.rows["conservation"]) + len(mp.rows["scenario_conservation"]) == 3 * (1 + 6)
    assert len(mp.rows["coupling"]) == 36 and len(mp.rows["theta"]) == 6
    assert len(mp.rows["capacity"]) == 6 and len(mp.rows["value"]) == 1
    assert (0, 1) not in mp.scenario_vars and (0, 7) in mp.scenario_vars


def test_single_arc_model_forces_zero(single_arc):
    lp, mp = build_model(single_arc, 1, TWO_PHASE, Fraction(5))
    assert len(mp.scenarios) == 1
    assert [a for (_, a) in mp.scenario_vars] == [2]
    out = solve_lp(lp, "exact")
    assert out.values[mp.theta] == 0 and out.values[mp.scenario_vars[0, 2]] == 0


def test_full_destruction(rng):
    from kamrfp.instances import random_network

    for _ in range(10):
        net = random_network(rng, max_n=5, max_m=5)
        lp, mp = build_model(net, net.m, COMBINED)
        assert len(mp.scenarios) == 1
        assert solve_kamrfp(net, net.m).theta == 0


def test_build_errors(b4):
    with pytest.raises(ValueError, match="k must"):
        build_model(b4, 0, COMBINED)
    with pytest.raises(ValueError, match="k must"):
        build_model(b4, 7, COMBINED)
    with pytest.raises(ValueError, match="fstar"):
        build_model(b4, 1, TWO_PHASE)


def test_guardrail_names_growth():
    net = Network(2, tuple(Arc(1, 2, Fraction(1)) for _ in range(30)), 1, 2)
    with pytest.raises(ModelTooLarge, match=r"O\(m\^\(k\+1\)\)"):
        build_model(net, 4, COMBINED)
    with pytest.raises(ModelTooLarge):
        build_model(parallel_example(4), 2, COMBINED, max_vars=10)


@pytest.mark.parametrize("mode", [TWO_PHASE, COMBINED])
def test_parallel_example_k1(b4, mode):
    sol = solve_kamrfp(b4, 1, mode)
    assert (sol.fstar, sol.theta, sol.loss) == (4, 2, 2)
    assert sol.flow.as_list() == [1, 1, 1, 1, 2, 2, 4]
    assert sol.certified and sol.worst_attack == (5,)


def test_parallel_example_k2(b4):
    sol = solve_kamrfp(b4, 2)
    assert (sol.theta, sol.loss) == (0, 4)
    assert sol.worst_attack == (5, 6)


def test_two_parallel_arcs(parallel_12):
    sol = solve_kamrfp(parallel_12, 1)
    # the maximum flow (1, 2) is unique; deleting arc 1 leaves 2, deleting arc 2 leaves 1
    assert worst_case(parallel_12, max_flow(parallel_12).flow, 1).residual == 1
    assert sol.flow.as_list() == [1, 2, 3]
    assert (sol.theta, sol.loss, sol.worst_attack) == (1, 2, (2,))


def test_no_path_short_circuits():
    net = parse_network(open("fixtures/disconnected.dimacs").read())
    sol = solve_kamrfp(net, 1)
    assert (sol.fstar, sol.theta, sol.loss) == (0, 0, 0)
    assert sol.worst_attack == () and sol.certified


@pytest.mark.parametrize("b", [4, 6, 8])
def test_even_b_split(b):
    sol = solve_kamrfp(parallel_example(b), 1)
    assert sol.theta == Fraction(b, 2)
    assert sol.flow[b + 1] == sol.flow[b + 2] == Fraction(b, 2)


def test_exact_and_guided_agree(rng):
    from kamrfp.instances import random_network

    for _ in range(15):
        net = random_network(rng, max_n=5, max_m=6)
        k = rng.randint(1, min(2, net.m))
        a = solve_kamrfp(net, k, lp_method="exact")
        b = solve_kamrfp(net, k, lp_method="guided")
        assert a.theta == b.theta and a.certified and b.certified
        check_flow(net, a.flow)
        check_flow(net, b.flow)


def test_unrefined_solution_is_still_optimal(b4):
    sol = solve_kamrfp(b4, 2, refine=False)
    assert sol.theta == 0 and sol.certified


def test_no_certify_leaves_flag_false(b4):
    sol = solve_kamrfp(b4, 1, certify=False)
    assert not sol.certified and sol.worst_attack is None


def test_budget_exceeded_reports_uncertified(b4):
    sol = solve_kamrfp(b4, 1, budget=2)
    assert sol.theta == 2 and not sol.certified
