from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prisparse import (Disconnected, Family, PriorityGraph, Subgraph, greedy_spanner,
                       is_valid_single, metric_closure, minimum_spanning_tree, path_greedy,
                       shortest_path, steiner_mst_2approx, subset_spanner_closure)
from prisparse.solvers import GreedySpanner, PathGreedy, SteinerMst2Approx, SubsetSpannerClosure

from brute import brute_steiner, distances
from strategies import priority_graphs


def cycle4():
    return PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1, ("a", "d"): 1})


def star():
    return PriorityGraph({("s", "x"): 1, ("s", "y"): 1, ("s", "z"): 1})


def k4():
    return PriorityGraph({e: 1 for e in combinations("abcd", 2)})


# Steiner 2-approximation

def test_steiner_two_terminals_is_shortest_path():
    g = cycle4()
    assert steiner_mst_2approx(g, {"a", "c"}).edges == set(shortest_path(g, "a", "c")[1])


def test_steiner_single_terminal_is_empty():
    h = steiner_mst_2approx(cycle4(), {"b"})
    assert h.edges == set() and h.nodes == {"b"}


def test_steiner_star_leaves():
    h = steiner_mst_2approx(star(), {"x", "y", "z"})
    assert h.weight == 3 == brute_steiner(star(), {"x", "y", "z"})
    assert h.edges == set(star().edges)


def test_steiner_disconnected():
    g = PriorityGraph({("a", "b"): 1, ("c", "d"): 1})
    with pytest.raises(Disconnected):
        steiner_mst_2approx(g, {"a", "d"})


@given(priority_graphs(max_n=6, max_extra=5), st.data())
def test_steiner_within_twice_optimum(g, data):
    ts = data.draw(st.sets(st.sampled_from(g.vertices), min_size=1))
    h = steiner_mst_2approx(g, ts)
    assert is_valid_single(g, ts, h, Family.tree()).valid
    assert h.weight <= 2 * brute_steiner(g, ts)


# Greedy spanner

def test_greedy_on_tree_keeps_tree():
    g = PriorityGraph({("a", "b"): 2, ("b", "c"): 1, ("b", "d"): 3})
    assert greedy_spanner(g, 1).edges == set(g.edges)


def test_greedy_unit_cycle_stretch3():
    # Edges in order ab, ad, bc, cd: the last sees d(c, d) = 3 <= 3 and is skipped.
    h = greedy_spanner(cycle4(), 3)
    assert h.edges == {("a", "b"), ("a", "d"), ("b", "c")}


def test_greedy_k4_stretch3_is_star():
    h = greedy_spanner(k4(), 3)
    assert h.edges == {("a", "b"), ("a", "c"), ("a", "d")}


@given(priority_graphs(max_n=7), st.sampled_from([1, 2, 3, Fraction(3, 2)]))
def test_greedy_stretch_holds(g, alpha):
    h = greedy_spanner(g, alpha)
    dg = distances(g.edges, g.weights, g.vertices)
    dh = distances(h.edges, g.weights, g.vertices)
    for u, v in combinations(g.vertices, 2):
        assert dh[u][v] <= alpha * dg[u][v]


@given(priority_graphs(min_n=3, max_n=9, max_extra=14, unit=True), st.integers(1, 3))
def test_greedy_girth_exceeds_2t(g, t):
    h = greedy_spanner(g, 2 * t - 1)
    girth = nx.girth(nx.Graph(list(h.edges)))
    assert girth > 2 * t


# Subset spanner via metric closure

def test_subset_two_terminals():
    g = cycle4()
    assert subset_spanner_closure(g, {"a", "c"}, 3).edges == set(shortest_path(g, "a", "c")[1])


def test_subset_on_own_closure_equals_greedy():
    g = PriorityGraph({("a", "b"): 2, ("a", "c"): 3, ("b", "c"): 4, ("a", "d"): 2,
                       ("b", "d"): 3, ("c", "d"): 5})
    assert subset_spanner_closure(g, g.vertices, 3).edges == greedy_spanner(g, 3).edges


def test_subset_star_expansion():
    # Closure is a triangle of 2s; greedy keeps two sides, which expand to all three spokes.
    mc = metric_closure(star(), {"x", "y", "z"})
    assert len(greedy_spanner(mc.weights, 3).edges) == 2
    h = subset_spanner_closure(star(), {"x", "y", "z"}, 3)
    assert h.weight == 3 and h.edges == set(star().edges)


@given(priority_graphs(max_n=7), st.data(), st.integers(1, 3))
def test_subset_stretch_and_lightness(g, data, t):
    ts = sorted(data.draw(st.sets(st.sampled_from(g.vertices), min_size=2)))
    alpha = 2 * t - 1
    h = subset_spanner_closure(g, ts, alpha)
    assert is_valid_single(g, ts, h, Family.multiplicative(alpha)).valid
    mst = minimum_spanning_tree(metric_closure(g, ts).weights).weight
    assert h.weight <= (1 + Fraction(len(ts), 2 * t)) * mst


# Path greedy

def test_path_greedy_tree_leaves():
    tree = PriorityGraph({("r", "a"): 1, ("r", "b"): 2, ("b", "c"): 1, ("b", "d"): 1, ("r", "e"): 1})
    leaves = ["a", "c", "d"]
    h = path_greedy(tree, combinations(leaves, 2), Family.preserver())
    assert h.edges == {("a", "r"), ("b", "r"), ("b", "c"), ("b", "d")}


def test_path_greedy_slack_additive_adds_one_path():
    g = PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1})
    h = path_greedy(g, [("a", "d"), ("a", "c"), ("b", "d")], Family.additive(10))
    assert h.edges == set(g.edges) and len(h.edges) == 3


def test_path_greedy_cycle_preserver_keeps_all():
    g = cycle4()
    h = path_greedy(g, combinations("abcd", 2), Family.preserver())
    assert h.edges == set(g.edges)


def test_path_greedy_disconnected():
    g = PriorityGraph({("a", "b"): 1, ("c", "d"): 1})
    with pytest.raises(Disconnected):
        path_greedy(g, [("a", "c")], Family.preserver())


@given(priority_graphs(max_n=7), st.data(),
       st.sampled_from([Family.preserver(), Family.additive(1), Family.additive(2)]))
def test_path_greedy_satisfies_pairs(g, data, fam):
    ts = sorted(data.draw(st.sets(st.sampled_from(g.vertices), min_size=2)))
    pairs = list(combinations(ts, 2))
    h = path_greedy(g, pairs, fam)
    assert is_valid_single(g, ts, h, fam).valid


# Solver objects

@given(priority_graphs(max_n=7), st.data())
def test_every_solver_output_is_valid_and_unions_stay_valid(g, data):
    ts = sorted(data.draw(st.sets(st.sampled_from(g.vertices), min_size=1)))
    cases = [
        (SteinerMst2Approx(), Family.tree()),
        (GreedySpanner(), Family.multiplicative(3)),
        (SubsetSpannerClosure(), Family.multiplicative(3)),
        (SubsetSpannerClosure(Fraction(3, 2)), Family.multiplicative(2)),
        (PathGreedy(), Family.additive(2)),
        (PathGreedy(), Family.preserver()),
    ]
    for solver, fam in cases:
        assert solver.compatible(fam)
        h = solver.solve(g, fam, ts)
        assert is_valid_single(g, ts, h, fam).valid, (solver, fam)
        if not fam.is_tree:
            other = Subgraph.of(g, [e for e in g.edges if data.draw(st.booleans())])
            assert is_valid_single(g, ts, h.union(other), fam).valid


def test_solver_compatibility():
    assert not SteinerMst2Approx().compatible(Family.multiplicative(3))
    assert not GreedySpanner(5).compatible(Family.multiplicative(3))
    assert GreedySpanner(2).compatible(Family.multiplicative(3))
    assert not PathGreedy().compatible(Family.tree())
    assert not SubsetSpannerClosure().compatible(Family.additive(2))
