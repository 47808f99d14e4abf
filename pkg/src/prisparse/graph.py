"""Weighted undirected graphs with vertex priorities, plus the path/tree primitives.

Weights are kept as :class:`fractions.Fraction` throughout so that weight
comparisons against the brute-force oracle are exact.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Any, Hashable, Union

from .errors import Disconnected, GraphError, Unreachable

Vertex = Hashable
Edge = tuple  # canonical (u, v) with u < v


def edge_key(u: Vertex, v: Vertex) -> Edge:
    if u == v:
        raise GraphError(f"self-loop at {u!r}")
    return (u, v) if u < v else (v, u)


def as_weight(x: Any) -> Fraction:
    w = Fraction(x)
    if w <= 0:
        raise GraphError(f"edge weight must be positive, got {x!r}")
    return w


def _adjacency(weights: Mapping[Edge, Fraction], nodes: Iterable[Vertex] = ()) -> dict:
    adj: dict = {v: {} for v in nodes}
    for (u, v), w in weights.items():
        adj.setdefault(u, {})[v] = w
        adj.setdefault(v, {})[u] = w
    return adj


class PriorityGraph:
    """Undirected weighted graph whose vertices carry priorities in ``0..k``.

    ``edges`` is either a mapping ``(u, v) -> weight`` or an iterable of
    ``(u, v, weight)`` triples. Vertices missing from ``priority`` get
    priority 0. ``k`` defaults to the largest priority present (at least 1).
    """

    def __init__(self, edges, priority: Mapping | None = None, k: int | None = None,
                 vertices: Iterable[Vertex] = ()):
        items = edges.items() if isinstance(edges, Mapping) else ((e[:2], e[2]) for e in edges)
        weights: dict[Edge, Fraction] = {}
        for (u, v), w in items:
            key = edge_key(u, v)
            if key in weights:
                raise GraphError(f"parallel edge {key!r}")
            weights[key] = as_weight(w)
        priority = dict(priority or {})
        vs = set(vertices) | set(priority)
        for u, v in weights:
            vs.update((u, v))
        for v in vs:
            priority.setdefault(v, 0)
        top = max(priority.values(), default=0)
        k = max(top, 1) if k is None else int(k)
        if k < 1:
            raise GraphError(f"k must be >= 1, got {k}")
        for v, p in priority.items():
            if not isinstance(p, int) or not 0 <= p <= k:
                raise GraphError(f"priority of {v!r} must be an integer in [0, {k}], got {p!r}")
        self._vertices = tuple(sorted(vs))
        self._weights = MappingProxyType(dict(sorted(weights.items())))
        self._priority = MappingProxyType(priority)
        self._k = k

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def weights(self) -> Mapping[Edge, Fraction]:
        return self._weights

    @property
    def edges(self) -> tuple:
        return tuple(self._weights)

    @property
    def priority(self) -> Mapping[Vertex, int]:
        return self._priority

    @property
    def k(self) -> int:
        return self._k

    @cached_property
    def adj(self) -> dict:
        return _adjacency(self._weights, self._vertices)

    def terminals(self, level: int = 1) -> frozenset:
        """Vertices of priority at least ``level`` (level >= 1)."""
        return frozenset(v for v, p in self._priority.items() if p >= max(level, 1))

    def with_priorities(self, priority: Mapping, k: int | None = None) -> "PriorityGraph":
        return PriorityGraph(self._weights, priority, self._k if k is None else k, self._vertices)

    def subgraph(self, edges: Iterable[Edge], nodes: Iterable[Vertex] = ()) -> "Subgraph":
        return Subgraph.of(self, edges, nodes)

    def total_weight(self) -> Fraction:
        return sum(self._weights.values(), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, PriorityGraph):
            return NotImplemented
        return (self._vertices, dict(self._weights), dict(self._priority), self._k) == (
            other._vertices, dict(other._weights), dict(other._priority), other._k)

    def __hash__(self):
        return hash((self._vertices, tuple(self._weights.items()), self._k))

    def __repr__(self):
        return f"PriorityGraph(|V|={len(self._vertices)}, |E|={len(self._weights)}, k={self._k})"


@dataclass(frozen=True, eq=True)
class Subgraph:
    """Edge subset of a parent graph, carrying the parent's weights.

    ``nodes`` lists every vertex of the subgraph, so isolated terminals
    survive even when no edge touches them.
    """

    weights: Mapping[Edge, Fraction]
    nodes: frozenset = field(default_factory=frozenset)

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def of(cls, g, edges: Iterable[Edge], nodes: Iterable[Vertex] = ()) -> "Subgraph":
        parent = _weights(g)
        picked = {}
        for e in edges:
            key = edge_key(*e)
            if key not in parent:
                raise GraphError(f"edge {key!r} not in parent graph")
            picked[key] = parent[key]
        ns = set(nodes)
        for u, v in picked:
            ns.update((u, v))
        return cls(dict(sorted(picked.items())), frozenset(ns))

    @property
    def edges(self) -> frozenset:
        return frozenset(self.weights)

    @property
    def weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    @cached_property
    def adj(self) -> dict:
        return _adjacency(self.weights, self.nodes)

    def union(self, other: "Subgraph") -> "Subgraph":
        merged = dict(self.weights)
        merged.update(other.weights)
        return Subgraph(dict(sorted(merged.items())), self.nodes | other.nodes)

    def __len__(self):
        return len(self.weights)


GraphLike = Union[PriorityGraph, Subgraph, Mapping]


def _weights(g: GraphLike) -> Mapping[Edge, Fraction]:
    return g.weights if isinstance(g, (PriorityGraph, Subgraph)) else g


def _adj(g: GraphLike) -> dict:
    if isinstance(g, (PriorityGraph, Subgraph)):
        return g.adj
    return _adjacency(g)


def _nodes(g: GraphLike) -> tuple:
    if isinstance(g, PriorityGraph):
        return g.vertices
    if isinstance(g, Subgraph):
        return tuple(sorted(g.nodes | {x for e in g.weights for x in e}))
    return tuple(sorted({x for e in g for x in e}))


def dijkstra(g: GraphLike, source: Vertex, cutoff: Fraction | None = None) -> dict:
    """Distances from ``source`` to every vertex reachable within ``cutoff``."""
    return dijkstra_adj(_adj(g), source, cutoff)


def dijkstra_adj(adj: dict, source: Vertex, cutoff: Fraction | None = None) -> dict:
    dist = {source: Fraction(0)}
    done = set()
    heap = [(Fraction(0), source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, {}).items():
            nd = d + w
            if cutoff is not None and nd > cutoff:
                continue
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _lex_path(adj: dict, du: dict, dv: dict, u: Vertex, v: Vertex) -> list:
    # Walk from u, always stepping to the smallest neighbour that stays on a shortest u-v path.
    total = du[v]
    path = [u]
    cur = u
    while cur != v:
        cur = min(x for x, w in adj[cur].items()
                  if x in du and x in dv and du[cur] + w == du[x] and du[x] + dv[x] == total)
        path.append(cur)
    return path


def shortest_path(g: GraphLike, u: Vertex, v: Vertex) -> tuple[Fraction, list]:
    """Shortest u-v path as ``(distance, edges)``.

    Among minimum-weight paths the one with the lexicographically smallest
    vertex sequence is returned. Raises :class:`Unreachable` otherwise.
    """
    if u == v:
        return Fraction(0), []
    du = dijkstra(g, u)
    if v not in du:
        raise Unreachable(u, v)
    dv = dijkstra(g, v)
    verts = _lex_path(_adj(g), du, dv, u, v)
    return du[v], [edge_key(a, b) for a, b in zip(verts, verts[1:])]


def distance(g: GraphLike, u: Vertex, v: Vertex) -> Fraction | None:
    """d(u, v), or None when v is unreachable."""
    return dijkstra(g, u).get(v)


@dataclass(frozen=True)
class MetricClosure:
    """Complete graph over ``terminals`` weighted by shortest-path distance.

    ``witness[(u, v)]`` is the deterministic shortest path in the host graph
    realising the closure edge ``(u, v)``.
    """

    terminals: tuple
    weights: dict
    witness: dict

    def expand(self, closure_edges: Iterable[Edge]) -> set:
        out = set()
        for e in closure_edges:
            out.update(self.witness[edge_key(*e)])
        return out


def metric_closure(g: GraphLike, terminals: Iterable[Vertex]) -> MetricClosure:
    ts = tuple(sorted(set(terminals)))
    adj = _adj(g)
    dist = {t: dijkstra(g, t) for t in ts}
    weights, witness = {}, {}
    for i, u in enumerate(ts):
        for v in ts[i + 1:]:
            if v not in dist[u]:
                raise Disconnected(ts, f"terminals {u!r} and {v!r} are not connected")
            verts = _lex_path(adj, dist[u], dist[v], u, v)
            weights[(u, v)] = dist[u][v]
            witness[(u, v)] = tuple(edge_key(a, b) for a, b in zip(verts, verts[1:]))
    return MetricClosure(ts, weights, witness)


class _DisjointSet:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def minimum_spanning_tree(g: GraphLike) -> Subgraph:
    """Kruskal with ties broken by (weight, u, v). Raises Disconnected."""
    weights = _weights(g)
    nodes = _nodes(g)
    ds = _DisjointSet(nodes)
    kept = {}
    for e, w in sorted(weights.items(), key=lambda item: (item[1], item[0])):
        if ds.union(*e):
            kept[e] = w
    if nodes and len(kept) != len(nodes) - 1:
        raise Disconnected(nodes, "graph is not connected")
    return Subgraph(dict(sorted(kept.items())), frozenset(nodes))


def components(g: GraphLike, extra_nodes: Iterable[Vertex] = ()) -> list[frozenset]:
    """Connected components, each a frozenset, sorted by smallest member."""
    ds = _DisjointSet(list(_nodes(g)) + list(extra_nodes))
    for u, v in _weights(g):
        ds.union(u, v)
    groups: dict = {}
    for x in list(ds.parent):
        groups.setdefault(ds.find(x), set()).add(x)
    return sorted((frozenset(c) for c in groups.values()), key=min)


def find_cycle(edges: Iterable[Edge]) -> list | None:
    """Edges of some cycle in the given edge set, or None if it is a forest."""
    ds = _DisjointSet()
    adj: dict = {}
    for u, v in sorted(edges):
        if not ds.union(u, v):
            # u and v already connected: the tree path plus (u, v) is a cycle.
            prev = {u: None}
            stack = [u]
            while stack:
                x = stack.pop()
                for y in sorted(adj.get(x, ())):
                    if y not in prev:
                        prev[y] = x
                        stack.append(y)
            cycle = [(u, v)]
            x = v
            while prev[x] is not None:
                cycle.append(edge_key(x, prev[x]))
                x = prev[x]
            return cycle
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return None


def prune_leaves(edges: Iterable[Edge], keep: Iterable[Vertex]) -> set:
    """Repeatedly drop edges hanging off degree-1 vertices not in ``keep``."""
    edges = set(edges)
    keep = set(keep)
    deg: dict = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    leaves = [x for x, d in deg.items() if d == 1 and x not in keep]
    while leaves:
        x = leaves.pop()
        if deg.get(x) != 1:
            continue
        e = next(e for e in edges if x in e)
        edges.discard(e)
        for y in e:
            deg[y] -= 1
            if deg[y] == 1 and y not in keep:
                leaves.append(y)
    return edges
