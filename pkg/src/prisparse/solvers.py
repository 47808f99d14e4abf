"""Single-priority sparsifiers used as the per-level subroutine of the pipeline."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .constraints import ADDITIVE, MULTIPLICATIVE, PRESERVER, Family
from .errors import Disconnected, Unreachable
from .graph import (GraphLike, PriorityGraph, Subgraph, Vertex, _nodes, _weights, dijkstra, dijkstra_adj,
                    metric_closure, minimum_spanning_tree, prune_leaves, shortest_path)


def greedy_spanner(g: GraphLike, alpha) -> Subgraph:
    """Greedy all-pairs ``alpha``-spanner.

    Edges are scanned by nondecreasing weight (ties by endpoints); an edge is
    kept only when the spanner built so far has no path of length at most
    ``alpha * w`` between its endpoints.
    """
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("stretch must be >= 1")
    kept: dict = {}
    adj: dict = {}
    for e, w in sorted(_weights(g).items(), key=lambda item: (item[1], item[0])):
        u, v = e
        budget = alpha * w
        if v not in dijkstra_adj(adj, u, cutoff=budget):
            kept[e] = w
            adj.setdefault(u, {})[v] = w
            adj.setdefault(v, {})[u] = w
    return Subgraph(dict(sorted(kept.items())), frozenset(_nodes(g)))


def subset_spanner_closure(g: GraphLike, terminals: Iterable[Vertex], alpha) -> Subgraph:
    """Subset ``alpha``-spanner over ``terminals``: greedy on the metric closure, then expand.

    Each kept closure edge is replaced by its memoised witness path, so the
    result weighs at most the greedy closure spanner.
    """
    ts = frozenset(terminals)
    mc = metric_closure(g, ts)
    closure_spanner = greedy_spanner(mc.weights, alpha)
    return Subgraph.of(g, mc.expand(closure_spanner.edges), ts)


def steiner_mst_2approx(g: GraphLike, terminals: Iterable[Vertex]) -> Subgraph:
    """Steiner tree within a factor 2 of optimal (MST of the metric closure)."""
    ts = frozenset(terminals)
    if len(ts) <= 1:
        return Subgraph({}, ts)
    mc = metric_closure(g, ts)
    union = mc.expand(minimum_spanning_tree(mc.weights).edges)
    # Overlapping witness paths can close cycles; the MST of the union drops the heaviest edges.
    tree = minimum_spanning_tree(Subgraph.of(g, union))
    return Subgraph.of(g, prune_leaves(tree.edges, ts), ts)


def path_greedy(g: GraphLike, pairs: Iterable[tuple], family: Family) -> Subgraph:
    """Add a shortest path for every pair whose distance constraint is still violated.

    Pairs are visited by nonincreasing host distance, ties lexicographic.
    No size guarantee; the output satisfies ``family`` on every given pair.
    """
    pairs = sorted({tuple(sorted(p)) for p in pairs if p[0] != p[1]})
    dist: dict = {}
    for u, v in pairs:
        if u not in dist:
            dist[u] = dijkstra(g, u)
        if v not in dist[u]:
            raise Disconnected((u, v), f"pair {(u, v)!r} is not connected")
    order = sorted(pairs, key=lambda p: (-dist[p[0]][p[1]], p))
    chosen: set = set()
    for u, v in order:
        d_g = dist[u][v]
        h = Subgraph.of(g, chosen)
        d_h = dijkstra(h, u).get(v) if chosen else None
        if d_h is None or d_h > family.bound(d_g):
            try:
                _, path = shortest_path(g, u, v)
            except Unreachable as exc:  # pragma: no cover - guarded above
                raise Disconnected((u, v)) from exc
            chosen.update(path)
    nodes = {x for p in pairs for x in p}
    return Subgraph.of(g, chosen, nodes)


# Solver objects: the pluggable per-level subroutine. ``ratio`` is the known
# approximation factor against the single-priority optimum, or None.

@dataclass(frozen=True)
class SteinerMst2Approx:
    name = "steiner2approx"
    ratio = Fraction(2)

    def compatible(self, family: Family) -> bool:
        return family.is_tree

    def solve(self, g: PriorityGraph, family: Family, terminals, pairs=None) -> Subgraph:
        return steiner_mst_2approx(g, terminals)


@dataclass(frozen=True)
class GreedySpanner:
    alpha: Fraction | None = None
    name = "greedy"
    ratio = None

    def _alpha(self, family: Family) -> Fraction:
        return family.param if self.alpha is None else Fraction(self.alpha)

    def compatible(self, family: Family) -> bool:
        if family.kind == PRESERVER:
            return self.alpha is None or self.alpha == 1
        return family.kind == MULTIPLICATIVE and self._alpha(family) <= family.param

    def solve(self, g, family, terminals, pairs=None) -> Subgraph:
        alpha = Fraction(1) if family.kind == PRESERVER else self._alpha(family)
        h = greedy_spanner(g, alpha)
        return Subgraph(h.weights, h.nodes | frozenset(terminals))


@dataclass(frozen=True)
class SubsetSpannerClosure(GreedySpanner):
    name = "subset"

    def solve(self, g, family, terminals, pairs=None) -> Subgraph:
        alpha = Fraction(1) if family.kind == PRESERVER else self._alpha(family)
        return subset_spanner_closure(g, terminals, alpha)


@dataclass(frozen=True)
class PathGreedy:
    name = "pathgreedy"
    ratio = None

    def compatible(self, family: Family) -> bool:
        return family.kind in (ADDITIVE, PRESERVER)

    def solve(self, g, family, terminals, pairs=None) -> Subgraph:
        if pairs is None:
            pairs = combinations(sorted(terminals), 2)
        h = path_greedy(g, pairs, family)
        return Subgraph(h.weights, h.nodes | frozenset(terminals))
