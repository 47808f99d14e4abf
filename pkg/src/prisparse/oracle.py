"""Exact brute-force baselines for small instances.

The k-priority optimum is found over nested edge-set chains
``H_k <= ... <= H_1`` (equivalently, rate vectors ``E -> {0..k}``). Because
``weight = sum_i w(H_i)`` under linear rates, the search is a dynamic
program over levels: the best chain ending in edge set ``S`` at level ``i``
extends the best chain ending in any valid subset of ``S`` at level ``i+1``,
and "min over subsets" is a sum-over-subsets transform. Weights are scaled to
integers so every comparison is exact.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .constraints import ADDITIVE, Family, KPrioritySolution
from .errors import BudgetExceeded, Disconnected, Infeasible
from .graph import PriorityGraph, Subgraph, components, dijkstra, minimum_spanning_tree, prune_leaves, shortest_path
from .pipeline import HALVING, RunReport, Solver, run


@dataclass(frozen=True)
class OracleBudget:
    max_edges: int = 16
    max_k: int = 8
    max_states: int = 1 << 22

    def check_chain(self, g: PriorityGraph) -> None:
        m = len(g.edges)
        if m > self.max_edges or g.k > self.max_k or g.k * (1 << m) > self.max_states:
            raise BudgetExceeded(f"|E|={m}, k={g.k} exceeds {self}")


DEFAULT_BUDGET = OracleBudget()


class _MaskSpace:
    """Edge subsets of ``g`` as bitmasks (bit j = j-th edge in sorted order)."""

    def __init__(self, g: PriorityGraph):
        self.g = g
        self.edges = list(g.edges)
        self.m = len(self.edges)
        self.scale = lcm(*(w.denominator for w in g.weights.values())) if self.m else 1
        self.w = [int(g.weights[e] * self.scale) for e in self.edges]
        index = {v: i for i, v in enumerate(g.vertices)}
        self.n = len(index)
        self.index = index
        self.ends = [(index[u], index[v]) for u, v in self.edges]
        full = 1 << self.m
        weight = [0] * full
        for mask in range(1, full):
            low = mask & -mask
            weight[mask] = weight[mask ^ low] + self.w[low.bit_length() - 1]
        self.weight = weight
        self._valid: dict = {}

    def indicator_code(self, base: int) -> list[int]:
        """Edge-membership vector of each mask read as a base-``base`` numeral, first edge most significant."""
        place = [base ** (self.m - 1 - j) for j in range(self.m)]
        code = [0] * (1 << self.m)
        for mask in range(1, 1 << self.m):
            low = mask & -mask
            code[mask] = code[mask ^ low] + place[low.bit_length() - 1]
        return code

    def valid(self, terminals: frozenset, family: Family) -> list[bool]:
        key = (terminals, family)
        if key not in self._valid:
            ts = sorted(self.index[t] for t in terminals)
            if family.is_tree:
                table = [self._tree_ok(mask, ts) for mask in range(1 << self.m)]
            else:
                table = self._distance_table(ts, family)
            self._valid[key] = table
        return self._valid[key]

    def _tree_ok(self, mask: int, ts: list[int]) -> bool:
        if not ts:
            return True
        if mask == 0:
            return len(ts) <= 1
        if mask.bit_count() > self.n - 1:
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        touched = set()
        j = 0
        count = 0
        while mask:
            if mask & 1:
                a, b = self.ends[j]
                ra, rb = find(a), find(b)
                if ra == rb:
                    return False
                parent[ra] = rb
                touched.add(a)
                touched.add(b)
                count += 1
            mask >>= 1
            j += 1
        if count != len(touched) - 1:
            return False
        return all(t in touched for t in ts)

    def _distance_table(self, ts: list[int], family: Family) -> list[bool]:
        full = 1 << self.m
        if len(ts) <= 1:
            return [True] * full
        adj_all = self._adj(full - 1)
        pairs = list(combinations(ts, 2))
        allowed = {}
        for u in ts:
            dist = _int_dijkstra(adj_all, u)
            for a, b in pairs:
                if a == u:
                    d = dist.get(b)
                    if d is None:
                        raise Disconnected([self.g.vertices[a], self.g.vertices[b]])
                    if family.kind == ADDITIVE:
                        allowed[(a, b)] = d + family.param * self.scale
                    else:
                        allowed[(a, b)] = family.bound(Fraction(d))
        sources = sorted({a for a, _ in pairs})
        table = [False] * full
        for mask in range(full):
            adj = self._adj(mask)
            ok = True
            for u in sources:
                dist = _int_dijkstra(adj, u)
                for a, b in pairs:
                    if a == u and (b not in dist or dist[b] > allowed[(a, b)]):
                        ok = False
                        break
                if not ok:
                    break
            table[mask] = ok
        return table

    def _adj(self, mask: int) -> list[list]:
        adj: list[list] = [[] for _ in range(self.n)]
        j = 0
        while mask:
            if mask & 1:
                a, b = self.ends[j]
                adj[a].append((b, self.w[j]))
                adj[b].append((a, self.w[j]))
            mask >>= 1
            j += 1
        return adj

    def edges_of(self, mask: int) -> list:
        return [self.edges[j] for j in range(self.m) if mask >> j & 1]


def _int_dijkstra(adj: list[list], source: int) -> dict:
    dist = {source: 0}
    heap = [(0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            nd = d + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _check_connected(g: PriorityGraph, terminals) -> None:
    ts = frozenset(terminals)
    if len(ts) <= 1:
        return
    comp = next(c for c in components(g) if min(ts) in c)
    if not ts <= comp:
        raise Disconnected(sorted(ts), "terminals are not connected")


def exact_k_priority(g: PriorityGraph, family: Family, budget: OracleBudget = DEFAULT_BUDGET
                     ) -> tuple[KPrioritySolution, Fraction]:
    """Minimum-weight valid k-priority solution; ties go to the lexicographically smallest rate vector."""
    budget.check_chain(g)
    _check_connected(g, g.terminals(1))
    space = _MaskSpace(g)
    full = 1 << space.m
    base = g.k + 1
    big = base ** space.m
    code = space.indicator_code(base)
    inf = float("inf")
    # Each entry packs (weight, partial rate vector) into one int: weight * big + code.
    best = None
    for level in range(g.k, 0, -1):
        valid = space.valid(g.terminals(level), family)
        if best is None:
            cur = [space.weight[s] * big + code[s] if valid[s] else inf for s in range(full)]
        else:
            sub = best[:]
            for j in range(space.m):
                bit = 1 << j
                for s in range(full):
                    if s & bit and sub[s ^ bit] < sub[s]:
                        sub[s] = sub[s ^ bit]
            cur = [space.weight[s] * big + code[s] + sub[s] if valid[s] and sub[s] != inf else inf
                   for s in range(full)]
        best = cur
    top = min(best)
    if top == inf:
        raise Infeasible("no valid k-priority solution")
    weight, vector = divmod(top, big)
    rates = {}
    for j in range(space.m - 1, -1, -1):
        vector, r = divmod(vector, base)
        if r:
            rates[space.edges[j]] = r
    return KPrioritySolution(rates, g.k), Fraction(weight, space.scale)


def dreyfus_wagner(g: PriorityGraph, terminals) -> tuple[Fraction, Subgraph]:
    """Exact minimum Steiner tree over ``terminals`` by dynamic programming on terminal subsets."""
    ts = sorted(set(terminals))
    if len(ts) <= 1:
        return Fraction(0), Subgraph({}, frozenset(ts))
    _check_connected(g, ts)
    vs = [v for v in g.vertices if v in next(c for c in components(g) if ts[0] in c)]
    dist = {v: dijkstra(g, v) for v in vs}
    *rest, root = ts
    q = len(rest)
    # cost[S][v]: cheapest tree joining terminals of bitmask S and vertex v.
    cost = [dict() for _ in range(1 << q)]
    how: list[dict] = [dict() for _ in range(1 << q)]
    for i, t in enumerate(rest):
        for v in vs:
            cost[1 << i][v] = dist[t][v]
            how[1 << i][v] = ("path", t)
    for s in range(1, 1 << q):
        if s & (s - 1) == 0:
            continue
        split = {}
        for u in vs:
            best, arg = None, None
            sub = (s - 1) & s
            while sub:
                if sub < s ^ sub:  # each unordered split once
                    c = cost[sub][u] + cost[s ^ sub][u]
                    if best is None or c < best:
                        best, arg = c, sub
                sub = (sub - 1) & s
            split[u] = (best, arg)
        for v in vs:
            best, arg = None, None
            for u in vs:
                c = dist[v][u] + split[u][0]
                if best is None or c < best:
                    best, arg = c, u
            cost[s][v] = best
            how[s][v] = ("split", arg, split[arg][1])
    full = (1 << q) - 1
    edges: set = set()

    def build(s, v):
        kind = how[s][v]
        if kind[0] == "path":
            edges.update(shortest_path(g, kind[1], v)[1])
            return
        _, u, sub = kind
        edges.update(shortest_path(g, v, u)[1])
        build(sub, u)
        build(s ^ sub, u)

    build(full, root)
    tree = minimum_spanning_tree(Subgraph.of(g, edges))
    h = Subgraph.of(g, prune_leaves(tree.edges, ts), ts)
    assert h.weight == cost[full][root]
    return cost[full][root], h


def exact_single_priority(g: PriorityGraph, terminals, family: Family,
                          budget: OracleBudget = DEFAULT_BUDGET, method: str = "auto"
                          ) -> tuple[Subgraph, Fraction]:
    """Minimum-weight single-level sparsifier over ``terminals``.

    ``method`` is ``"enumerate"`` (all edge subsets), ``"dp"`` (Dreyfus-Wagner,
    tree family only) or ``"auto"``, which picks the smaller state space.
    """
    ts = frozenset(terminals)
    _check_connected(g, ts)
    m = len(g.edges)
    n = len(g.vertices)
    dp_states = (3 ** max(len(ts) - 1, 0)) * n * n
    if method == "auto":
        method = "dp" if family.is_tree and dp_states < (1 << m) else "enumerate"
    if method == "dp":
        if not family.is_tree:
            raise ValueError("dynamic programming is only available for the tree family")
        if dp_states > budget.max_states:
            raise BudgetExceeded(f"Steiner DP needs {dp_states} states")
        weight, h = dreyfus_wagner(g, ts)
        return h, weight
    if m > budget.max_edges or (1 << m) > budget.max_states:
        raise BudgetExceeded(f"|E|={m} exceeds {budget}")
    space = _MaskSpace(g)
    valid = space.valid(ts, family)
    big = 1 << space.m
    code = space.indicator_code(2)
    best = min((space.weight[s] * big + code[s] for s in range(big) if valid[s]), default=None)
    if best is None:
        raise Infeasible("no valid sparsifier")
    weight, vector = divmod(best, big)
    chosen = [space.edges[j] for j in range(space.m) if vector >> (space.m - 1 - j) & 1]
    return Subgraph.of(g, chosen, ts), Fraction(weight, space.scale)


@dataclass(frozen=True)
class ExactSolver:
    """Exact single-priority oracle, usable as the pipeline's per-level subroutine."""

    budget: OracleBudget = DEFAULT_BUDGET
    name = "exact"
    ratio = Fraction(1)

    def compatible(self, family: Family) -> bool:
        return True

    def solve(self, g, family, terminals, pairs=None) -> Subgraph:
        return exact_single_priority(g, terminals, family, self.budget)[0]


@dataclass(frozen=True)
class Certificate:
    ratio: Fraction
    bound: Fraction | None
    verdict: bool | None
    alg_weight: Fraction
    opt_weight: Fraction
    report: RunReport


def certify_ratio(g: PriorityGraph, family: Family, strategy: str, solver: Solver,
                  budget: OracleBudget = DEFAULT_BUDGET, grid: str = HALVING) -> Certificate:
    """Compare the pipeline against the exact optimum.

    The bound is ``4 * rho`` for a solver with known ratio ``rho``; solvers
    without one get no bound and no verdict.
    """
    _, opt = exact_k_priority(g, family, budget)
    _, report = run(g, family, strategy, solver, grid=grid)
    alg = report.total_weight
    if opt == 0:
        ratio = Fraction(1) if alg == 0 else Fraction(10 ** 9)
    else:
        ratio = alg / opt
    bound = None if solver.ratio is None else 4 * Fraction(solver.ratio)
    verdict = None if bound is None else ratio <= bound
    return Certificate(ratio, bound, verdict, alg, opt, report)
