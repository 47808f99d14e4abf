from fractions import Fraction
from itertools import product

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from prisparse import (Family, GraphError, KPrioritySolution, PriorityGraph, Subgraph,
                       UnknownEdge, is_valid_k_priority, is_valid_single, solution_weight)
from prisparse.constraints import level_weights

from strategies import priority_graphs


def triangle():
    return PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 1}, {"a": 1, "b": 1, "c": 1})


def cycle4():
    return PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1, ("a", "d"): 1},
                         dict.fromkeys("abcd", 1))


def test_family_canonicalisation():
    assert Family.multiplicative(1) == Family.preserver()
    assert Family.additive(0) == Family.preserver()
    assert Family.parse("mult:3") == Family.multiplicative(3)
    assert Family.parse("additive:2") == Family.additive(2)
    assert Family.parse("tree") == Family.tree()
    assert Family.parse("mult:1") == Family.preserver()
    assert str(Family.parse("mult:3/2")) == "mult:3/2"
    for bad in ("mult", "mult:1/2", "additive:-1", "steiner", "mult:x"):
        with pytest.raises(ValueError):
            Family.parse(bad)


def test_solution_weight_examples():
    g = PriorityGraph({("a", "b"): 3, ("b", "c"): 1}, k=2)
    assert solution_weight(g, KPrioritySolution({("a", "b"): 2, ("b", "c"): 1}, 2)) == 7
    assert solution_weight(g, KPrioritySolution({}, 2)) == 0
    assert solution_weight(g, KPrioritySolution({("a", "b"): 1, ("b", "c"): 1}, 2)) == 4
    with pytest.raises(UnknownEdge):
        solution_weight(g, KPrioritySolution({("a", "c"): 1}, 2))


def test_rates_must_be_in_range():
    with pytest.raises(GraphError):
        KPrioritySolution({("a", "b"): 3}, 2)
    with pytest.raises(GraphError):
        KPrioritySolution({("a", "b"): 0}, 2)


@given(priority_graphs(), st.data())
def test_weight_is_monotone_and_levels_sum(g, data):
    rates = {e: data.draw(st.integers(1, g.k)) for e in g.edges if data.draw(st.booleans())}
    s = KPrioritySolution(rates, g.k)
    w = solution_weight(g, s)
    assert sum(level_weights(g, s).values()) == w
    for i in range(2, g.k + 1):
        assert s.level_edges(i) <= s.level_edges(i - 1)
    missing = [e for e in g.edges if e not in rates]
    if missing:
        assert solution_weight(g, KPrioritySolution({**rates, missing[0]: 1}, g.k)) > w
    low = [e for e, r in rates.items() if r < g.k]
    if low:
        bumped = {**rates, low[0]: rates[low[0]] + 1}
        assert solution_weight(g, KPrioritySolution(bumped, g.k)) > w


def test_triangle_is_not_a_tree():
    g = triangle()
    report = is_valid_single(g, g.vertices, Subgraph.of(g, g.edges), Family.tree())
    assert not report.valid
    assert [v.kind for v in report.violations] == ["cycle"]


def test_single_shortest_path_preserves_two_terminals():
    g = cycle4()
    h = Subgraph.of(g, [("a", "b"), ("b", "c")])
    assert is_valid_single(g, {"a", "c"}, h, Family.preserver()).valid


def test_path_is_additive_two_spanner_of_cycle():
    # Worst pair is (a, d): 3 in the path against 1 in the cycle, and 3 <= 1 + 2.
    g = cycle4()
    h = Subgraph.of(g, [("a", "b"), ("b", "c"), ("c", "d")])
    assert is_valid_single(g, g.vertices, h, Family.additive(2)).valid
    report = is_valid_single(g, g.vertices, h, Family.additive(1))
    assert not report.valid
    (v,) = report.violations
    assert v.vertices == ("a", "d") and v.required == 2 and v.actual == 3


def test_tree_rejects_stray_component_and_reports_all():
    g = PriorityGraph({("a", "b"): 1, ("b", "c"): 1, ("c", "d"): 1, ("d", "e"): 1, ("e", "f"): 1})
    h = Subgraph.of(g, [("a", "b"), ("d", "e")])
    report = is_valid_single(g, {"a", "b"}, h, Family.tree())
    assert [v.kind for v in report.violations] == ["stray"]
    report = is_valid_single(g, {"a", "c", "f"}, Subgraph.of(g, [("a", "b")]), Family.tree())
    assert [v.kind for v in report.violations] == ["disconnected", "disconnected"]


def test_not_a_subgraph():
    g = cycle4()
    report = is_valid_single(g, {"a"}, [("a", "c")], Family.tree())
    assert report.violations[0].kind == "not-subgraph"


def test_single_terminal_levels():
    g = cycle4()
    assert is_valid_single(g, {"a"}, Subgraph({}, frozenset({"a"})), Family.tree()).valid
    assert is_valid_single(g, {"a"}, Subgraph.of(g, [("a", "b")]), Family.tree()).valid
    assert not is_valid_single(g, {"a"}, Subgraph.of(g, [("b", "c")]), Family.tree()).valid


@given(priority_graphs(), st.data())
def test_preserver_implies_weaker_families(g, data):
    ts = g.terminals(1) or {g.vertices[0]}
    edges = [e for e in g.edges if data.draw(st.booleans())]
    h = Subgraph.of(g, edges, ts)
    if is_valid_single(g, ts, h, Family.preserver()).valid:
        for fam in (Family.multiplicative(2), Family.multiplicative(Fraction(3, 2)),
                    Family.additive(1), Family.additive(Fraction(1, 2))):
            assert is_valid_single(g, ts, h, fam).valid


def test_k1_reduces_to_single_level():
    g = triangle()
    s = KPrioritySolution({("a", "b"): 1, ("b", "c"): 1}, 1)
    single = is_valid_single(g, g.terminals(1), s.level_subgraph(g, 1), Family.tree())
    assert is_valid_k_priority(g, s, Family.tree()).levels == single.levels


def test_level_two_disconnection_is_reported():
    g = PriorityGraph({("a", "b"): 1, ("b", "c"): 1}, {"a": 2, "b": 1, "c": 2})
    s = KPrioritySolution({("a", "b"): 2, ("b", "c"): 1}, 2)
    report = is_valid_k_priority(g, s, Family.tree())
    assert report.levels == {1: True, 2: False}
    assert report.violations[0].vertices == ("a", "c")


def two_level_tree_instance():
    # Three priority-2 vertices A, B, C and four priority-1 vertices p, q, r, s.
    edges = {("A", "p"): 1, ("B", "p"): 1, ("B", "C"): 2, ("C", "q"): 1, ("q", "r"): 1,
             ("A", "s"): 1, ("r", "s"): 2, ("p", "q"): 2}
    pr = {"A": 2, "B": 2, "C": 2, "p": 1, "q": 1, "r": 1, "s": 1}
    return PriorityGraph(edges, pr, 2)


def spans_as_tree(edges, terminals):
    h = nx.Graph(list(edges))
    if len(terminals) <= 1 and not edges:
        return True
    return bool(edges) and nx.is_tree(h) and set(terminals) <= set(h.nodes)


def test_two_level_tree_validity_by_enumeration():
    g = two_level_tree_instance()
    valid_count = 0
    for vector in product(range(3), repeat=len(g.edges)):
        rates = {e: r for e, r in zip(g.edges, vector) if r}
        s = KPrioritySolution(rates, 2)
        expected = (spans_as_tree([e for e, r in rates.items() if r == 2], g.terminals(2))
                    and spans_as_tree(list(rates), g.terminals(1)))
        got = is_valid_k_priority(g, s, Family.tree()).valid
        assert got == expected, rates
        valid_count += expected
    assert valid_count > 0
