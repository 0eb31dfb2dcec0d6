import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kamrfp.instances import random_network
from kamrfp.maxflow import max_flow, min_cut_cardinality, residual_value
from kamrfp.network import FlowError, Network, check_flow, make_flow, parse_network
from oracles import brute_min_cut


def test_single_arc(single_arc):
    res = max_flow(single_arc)
    assert res.value == 5 and res.min_cut == {1}
    assert res.flow.value == 5


def test_parallel_example_value_and_cut(b4):
    res = max_flow(b4)
    assert res.value == 4
    assert res.min_cut == {1, 2, 3, 4}
    check_flow(b4, res.flow)


def test_deleting_both_sink_arcs(b4):
    assert max_flow(b4, deleted={5, 6}).value == 0


def test_dummy_cannot_be_deleted(b4):
    with pytest.raises(ValueError):
        max_flow(b4, deleted={7})


def test_residual_examples(b4):
    phi = make_flow(b4, [1, 1, 1, 1, 2, 2])
    assert residual_value(b4, phi, {5}) == 2
    # oracle: brute-force min cut of the 5 surviving arcs with capacities phi
    expected = brute_min_cut(b4, caps=phi.values, deleted={1}, value_cap=phi.value)
    assert expected == 3
    assert residual_value(b4, phi, {1}) == expected
    assert residual_value(b4, phi, ()) == phi.value


def test_residual_rejects_infeasible_flow(b4):
    with pytest.raises(FlowError):
        residual_value(b4, make_flow(b4, [1, 1, 1, 1, 3, 2]), {5})


def test_residual_respects_flow_value_cap():
    # arcs s->t and t->s carrying a pure cycle: value 0, yet s->t has room 5
    net = Network(2, ((1, 2, Fraction(5)), (2, 1, Fraction(5))), 1, 2)
    phi = make_flow(net, {1: 5, 2: 5, 3: 0})
    assert max_flow(net, capacity_override={1: 5, 2: 5}).value == 5
    assert residual_value(net, phi, ()) == 0


def test_min_cut_cardinality(single_arc, b4):
    assert min_cut_cardinality(single_arc) == 1
    assert min_cut_cardinality(b4) == 2
    assert min_cut_cardinality(parse_network(open("fixtures/two_paths.dimacs").read())) == 2


def test_disconnected():
    net = parse_network(open("fixtures/disconnected.dimacs").read())
    res = max_flow(net)
    assert res.value == 0 and res.min_cut == frozenset()


@st.composite
def instances(draw):
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_network(rng, max_n=6, max_m=10)


@settings(max_examples=150, deadline=None)
@given(instances(), st.data())
def test_value_matches_brute_force_cut(net, data):
    deleted = data.draw(st.sets(st.sampled_from(list(net.arc_ids))))
    res = max_flow(net, deleted=deleted)
    assert res.value == brute_min_cut(net, deleted=deleted)
    assert res.value == sum((net.capacity(a) for a in res.min_cut), Fraction(0))
    assert not res.min_cut & deleted
    check_flow(net, res.flow)


@settings(max_examples=100, deadline=None)
@given(instances(), st.data())
def test_residual_monotone_and_bounded(net, data):
    phi = max_flow(net).flow
    ids = list(net.arc_ids)
    small = data.draw(st.sets(st.sampled_from(ids)))
    large = small | data.draw(st.sets(st.sampled_from(ids)))
    r_small = residual_value(net, phi, small)
    r_large = residual_value(net, phi, large)
    assert r_large <= r_small
    for deleted, r in ((small, r_small), (large, r_large)):
        assert 0 <= r <= phi.value
        assert r >= phi.value - sum((phi[a] for a in deleted), Fraction(0))
        assert r == brute_min_cut(net, caps=phi.values, deleted=deleted, value_cap=phi.value)


@settings(max_examples=50, deadline=None)
@given(instances())
def test_deterministic_flows(net):
    assert max_flow(net).flow == max_flow(net).flow


@settings(max_examples=50, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_any_scan_order_is_maximum(net, r):
    order = list(net.arc_ids)
    r.shuffle(order)
    res = max_flow(net, order=order)
    assert res.value == max_flow(net).value
    check_flow(net, res.flow)
