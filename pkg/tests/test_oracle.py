import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prisparse import (INCLUSIVE, BudgetExceeded, Family, PriorityGraph, Subgraph,
                       certify_ratio, dreyfus_wagner, exact_k_priority, exact_single_priority,
                       is_valid_k_priority, is_valid_single, round_up_priorities, run,
                       shortest_path, solution_weight)
from prisparse.generate import small_instance
from prisparse.oracle import ExactSolver, OracleBudget, _MaskSpace
from prisparse.pipeline import POW2
from prisparse.solvers import PathGreedy, SteinerMst2Approx, SubsetSpannerClosure

from brute import brute_k_priority, brute_steiner
from strategies import priority_graphs

FAMILIES = [Family.tree(), Family.multiplicative(2), Family.additive(1), Family.preserver()]


def triangle():
    return PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1}, {"a": 2, "b": 2, "c": 1}, 2)


def test_triangle_optimum():
    s, w = exact_k_priority(triangle(), Family.tree())
    assert w == 3
    assert s.rates == {("a", "b"): 2, ("b", "c"): 1}


def test_tree_graph_unique_path():
    g = PriorityGraph({("a", "b"): 2, ("b", "c"): 3, ("b", "d"): 1}, {"a": 1, "c": 1}, 1)
    s, w = exact_k_priority(g, Family.tree())
    assert w == 5 and s.rates == {("a", "b"): 1, ("b", "c"): 1}


def test_uniform_priorities_double_single_optimum():
    g = PriorityGraph({("a", "b"): 1, ("b", "c"): 2, ("a", "c"): 2, ("c", "d"): 1},
                      dict.fromkeys("abcd", 2), 2)
    s, w = exact_k_priority(g, Family.tree())
    _, single = exact_single_priority(g, g.vertices, Family.tree())
    assert w == 2 * single and set(s.rates.values()) == {2}


def test_single_priority_examples():
    g = PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1, ("a", "d"): 1})
    for fam in FAMILIES:
        _, w = exact_single_priority(g, {"a", "c"}, fam)
        assert w == shortest_path(g, "a", "c")[0]
    k4 = PriorityGraph({e: 1 for e in combinations("abcd", 2)})
    h, w = exact_single_priority(k4, k4.vertices, Family.multiplicative(3))
    assert w == 3 and len(h.edges) == 3
    star = PriorityGraph({("s", "x"): 1, ("s", "y"): 1, ("s", "z"): 1})
    for method in ("enumerate", "dp"):
        h, w = exact_single_priority(star, {"x", "y", "z"}, Family.tree(), method=method)
        assert w == 3 and h.edges == set(star.edges)


def test_budget_exceeded():
    g = PriorityGraph({(i, j): 1 for i, j in combinations(range(7), 2)}, {0: 3, 6: 1}, 3)
    with pytest.raises(BudgetExceeded):
        exact_k_priority(g, Family.tree(), OracleBudget(max_edges=12))
    with pytest.raises(BudgetExceeded):
        exact_k_priority(g, Family.tree(), OracleBudget(max_states=1 << 10))


@settings(max_examples=40)
@given(priority_graphs(max_n=5, max_extra=2, max_k=2), st.sampled_from(FAMILIES))
def test_chain_dp_matches_rate_vector_enumeration(g, family):
    if not g.terminals(1):
        return
    w, vector = brute_k_priority(g, family)
    s, got = exact_k_priority(g, family)
    assert got == w
    assert tuple(s.rates.get(e, 0) for e in g.edges) == vector


@given(priority_graphs(max_n=6, max_extra=4), st.data(), st.sampled_from(FAMILIES))
def test_mask_tables_agree_with_checker(g, data, family):
    ts = frozenset(data.draw(st.sets(st.sampled_from(g.vertices), min_size=1)))
    space = _MaskSpace(g)
    table = space.valid(ts, family)
    for mask in data.draw(st.lists(st.integers(0, (1 << space.m) - 1), max_size=20)):
        h = Subgraph.of(g, space.edges_of(mask), ts)
        assert table[mask] == is_valid_single(g, ts, h, family).valid, (mask, ts)


@given(priority_graphs(max_n=6, max_extra=5), st.data())
def test_dreyfus_wagner_matches_enumeration(g, data):
    ts = data.draw(st.sets(st.sampled_from(g.vertices), min_size=1))
    w_dp, h = dreyfus_wagner(g, ts)
    _, w_enum = exact_single_priority(g, ts, Family.tree(), method="enumerate")
    assert w_dp == w_enum == brute_steiner(g, ts)
    assert is_valid_single(g, ts, h, Family.tree()).valid and h.weight == w_dp


@given(priority_graphs(max_n=6, max_extra=4, max_k=1), st.sampled_from(FAMILIES))
def test_k1_matches_single_priority(g, family):
    if not g.terminals(1):
        return
    _, w = exact_k_priority(g, family)
    assert w == exact_single_priority(g, g.terminals(1), family)[1]


@given(priority_graphs(max_n=6, max_extra=4, max_k=3), st.sampled_from(FAMILIES))
def test_oracle_output_valid_and_below_pipeline(g, family):
    if not g.terminals(1):
        return
    s, w = exact_k_priority(g, family)
    assert is_valid_k_priority(g, s, family).valid
    assert solution_weight(g, s) == w
    _, rep = run(g, family, INCLUSIVE, ExactSolver())
    assert w <= rep.total_weight <= 4 * w


@given(priority_graphs(max_n=6, max_extra=4, max_k=4), st.sampled_from(["halving", POW2]))
def test_rounding_costs_at_most_double(g, grid):
    if not g.terminals(1):
        return
    _, w = exact_k_priority(g, Family.tree())
    _, w_round = exact_k_priority(round_up_priorities(g, grid).graph, Family.tree())
    assert w <= w_round <= 2 * w


def test_certify_k1_ratio_one():
    rng = random.Random(11)
    for _ in range(20):
        g = small_instance(rng, rng.randint(3, 6), rng.randint(3, 9), 1)
        cert = certify_ratio(g, Family.tree(), INCLUSIVE, ExactSolver())
        assert cert.ratio == 1 and cert.bound == 4 and cert.verdict


def test_certify_uniform_priorities_within_two():
    rng = random.Random(12)
    for _ in range(20):
        k = rng.choice([2, 3, 4])
        g = small_instance(rng, rng.randint(3, 6), rng.randint(3, 9), k)
        g = g.with_priorities(dict.fromkeys(g.vertices, k), k)
        cert = certify_ratio(g, Family.tree(), INCLUSIVE, ExactSolver())
        assert cert.ratio <= 2


def test_certify_bounds_follow_solver_ratio():
    g = triangle()
    assert certify_ratio(g, Family.tree(), INCLUSIVE, SteinerMst2Approx()).bound == 8
    cert = certify_ratio(g, Family.multiplicative(3), INCLUSIVE, SubsetSpannerClosure())
    assert cert.bound is None and cert.verdict is None
    assert certify_ratio(g, Family.preserver(), INCLUSIVE, PathGreedy()).ratio >= 1


def test_exact_weights_with_halves():
    g = PriorityGraph({("a", "b"): Fraction(1, 2), ("b", "c"): Fraction(3, 2), ("a", "c"): 3},
                      {"a": 2, "c": 2}, 2)
    s, w = exact_k_priority(g, Family.tree())
    assert w == 4 and s.rates == {("a", "b"): 2, ("b", "c"): 2}
