"""The rounding-up k-priority approximation: round, partition, solve per level, merge."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Protocol

from .constraints import Family, KPrioritySolution, ValidityReport, is_valid_k_priority
from .errors import (Disconnected, IncompatibleSolver, InvalidStrategyForFamily, NoTerminals,
                     PruningDisconnected)
from .graph import Edge, PriorityGraph, Subgraph, _DisjointSet, components

EXCLUSIVE = "exclusive"
INCLUSIVE = "inclusive"
PAIRWISE = "pairwise"
STRATEGIES = (EXCLUSIVE, INCLUSIVE, PAIRWISE)

HALVING = "halving"
POW2 = "pow2"
GRIDS = (HALVING, POW2)


class Solver(Protocol):
    name: str
    ratio: Fraction | None

    def compatible(self, family: Family) -> bool: ...

    def solve(self, g: PriorityGraph, family: Family, terminals, pairs=None) -> Subgraph: ...


def rounding_levels(k: int, grid: str = HALVING) -> tuple[int, ...]:
    """Ascending rounding targets for priorities in ``1..k``.

    ``pow2`` is every power of two up to ``2**ceil(log2 k)``. ``halving`` is
    ``k, k//2, k//4, ..., 1``; it coincides with ``pow2`` when k is a power
    of two and never has more than ``floor(log2 k) + 1`` entries.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if grid == POW2:
        return tuple(1 << j for j in range((k - 1).bit_length() + 1))
    if grid == HALVING:
        out = set()
        while k:
            out.add(k)
            k >>= 1
        return tuple(sorted(out))
    raise ValueError(f"unknown rounding grid {grid!r}")


def round_priority(p: int, levels: tuple[int, ...]) -> int:
    if p == 0:
        return 0
    return next(level for level in levels if level >= p)


@dataclass(frozen=True)
class Rounded:
    graph: PriorityGraph
    levels: tuple[int, ...]
    mapping: dict  # vertex -> (original, rounded), terminals only


def round_up_priorities(g: PriorityGraph, grid: str = HALVING) -> Rounded:
    """Round every nonzero priority up to the nearest level of the grid.

    Each priority at most doubles. The rounded graph's ``k`` is the top
    grid level, which exceeds ``g.k`` only for ``pow2`` with k not a power of two.
    """
    levels = rounding_levels(g.k, grid)
    new = {v: round_priority(p, levels) for v, p in g.priority.items()}
    mapping = {v: (g.priority[v], new[v]) for v in g.vertices if new[v]}
    return Rounded(g.with_priorities(new, levels[-1]), levels, mapping)


@dataclass(frozen=True)
class Partitioning:
    """Per-level terminal sets (exclusive/inclusive) or terminal-pair sets (pairwise)."""

    strategy: str
    levels: dict  # level -> frozenset of vertices or of (u, v) pairs
    root: object = None

    def terminals(self, level: int) -> frozenset:
        s = self.levels[level]
        if self.strategy == PAIRWISE:
            return frozenset(x for pair in s for x in pair)
        return s


def partition(g: PriorityGraph, strategy: str, levels: tuple[int, ...] | None = None,
              require_rounded: bool = True) -> Partitioning:
    """Split the terminals of an already-rounded graph across the active levels.

    With ``require_rounded=False`` every level ``1..k`` is active and no
    rounding check is made (used for oracle comparisons).
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    terminals = sorted(g.terminals(1))
    if not terminals:
        raise NoTerminals("graph has no vertex of priority >= 1")
    if not require_rounded:
        levels = tuple(range(1, g.k + 1))
    elif levels is None:
        levels = rounding_levels(g.k, HALVING)
    if require_rounded:
        off_grid = sorted(v for v in terminals if g.priority[v] not in levels)
        if off_grid:
            raise ValueError(f"priorities not rounded to levels {levels}: {off_grid}")

    pr = g.priority
    root = None
    if strategy == INCLUSIVE:
        parts = {level: g.terminals(level) for level in levels}
    elif strategy == PAIRWISE:
        parts = {level: set() for level in levels}
        for u, v in combinations(terminals, 2):
            parts[min(pr[u], pr[v])].add((u, v))
        parts = {level: frozenset(s) for level, s in parts.items()}
    else:
        top = max(pr[v] for v in terminals)
        root = min(v for v in terminals if pr[v] == top)
        parts = {level: frozenset({v for v in terminals if pr[v] == level} | {root})
                 for level in levels}
    return Partitioning(strategy, parts, root)


def constraint_count(p: Partitioning) -> tuple[dict[int, int], int]:
    """Distance constraints per level: pairs for pairwise, C(|S_i|, 2) otherwise."""
    if p.strategy == PAIRWISE:
        per = {level: len(s) for level, s in p.levels.items()}
    else:
        per = {level: comb(len(s), 2) for level, s in p.levels.items()}
    return per, sum(per.values())


def solve_levels(g: PriorityGraph, p: Partitioning, solver: Solver, family: Family
                 ) -> tuple[dict[int, Subgraph], int]:
    """Run the single-priority solver once per distinct nonempty level input.

    Returns the per-level subgraphs and the number of solver invocations.
    Identical inputs (levels duplicated by rounding) share one solve.
    """
    if not solver.compatible(family):
        raise IncompatibleSolver(f"solver {solver.name!r} cannot produce family {family}")
    use_pairs = p.strategy == PAIRWISE and getattr(solver, "name", "") == "pathgreedy"
    cache: dict = {}
    out = {}
    for level in sorted(p.levels, reverse=True):
        terminals = p.terminals(level)
        if not terminals:
            out[level] = Subgraph({}, frozenset())
            continue
        key = p.levels[level] if use_pairs else terminals
        if key not in cache:
            pairs = sorted(p.levels[level]) if use_pairs else None
            cache[key] = solver.solve(g, family, terminals, pairs)
        out[level] = cache[key]
    return out, len(cache)


def _prune_tree_merge(upper: dict[Edge, Fraction], new: dict[Edge, Fraction], terminals) -> set:
    # Keep every higher-rated edge; add lower-rated ones lightest first unless they close
    # a cycle. This removes, on each cycle, the lowest-rated edge (heaviest on ties).
    ds = _DisjointSet()
    for u, v in upper:
        ds.union(u, v)
    kept = set()
    for e in sorted(new, key=lambda e: (new[e], e)):
        if ds.union(*e):
            kept.add(e)
    # Drop dangling lower-rated edges that end at a non-terminal.
    deg: dict = {}
    for u, v in list(upper) + list(kept):
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    changed = True
    while changed:
        changed = False
        for e in sorted(kept):
            leaf = next((x for x in e if deg[x] == 1 and x not in terminals), None)
            if leaf is not None:
                kept.discard(e)
                for x in e:
                    deg[x] -= 1
                changed = True
    return kept


def merge_levels(g: PriorityGraph, solved: dict[int, Subgraph], family: Family
                 ) -> dict[int, Subgraph]:
    """Top-down merge: each level receives every edge of the levels above it.

    Under the tree constraint, cycles created by the union are broken by
    dropping lower-rated edges only, so each merged level H satisfies
    ``H_upper <= H <= H_upper | H_own``.
    """
    merged: dict[int, Subgraph] = {}
    above: Subgraph | None = None
    for level in sorted(solved, reverse=True):
        own = solved[level]
        terminals = g.terminals(level)
        if above is None:
            current = own
        elif not family.is_tree:
            current = above.union(own)
        else:
            new = {e: w for e, w in own.weights.items() if e not in above.weights}
            kept = _prune_tree_merge(above.weights, new, terminals)
            current = above.union(Subgraph.of(g, kept, own.nodes))
            if terminals:
                comp = next(c for c in components(current, terminals) if min(terminals) in c)
                if not terminals <= comp:
                    raise PruningDisconnected(f"merge at level {level} disconnected terminals")
        merged[level] = current
        above = current
    return merged


def rates_from_levels(merged: dict[int, Subgraph], k: int) -> KPrioritySolution:
    """Rate of an edge = highest level containing it, capped at ``k``."""
    rates: dict = {}
    for level in sorted(merged):
        for e in merged[level].weights:
            rates[e] = min(level, k)
    return KPrioritySolution(rates, k)


def merge(g: PriorityGraph, solved: dict[int, Subgraph], family: Family,
          k: int | None = None) -> KPrioritySolution:
    return rates_from_levels(merge_levels(g, solved, family), g.k if k is None else k)


@dataclass
class RunReport:
    family: str
    strategy: str
    solver: str
    grid: str
    levels: tuple[int, ...]
    rounding: dict
    constraints: dict[int, int]
    constraints_total: int
    solver_weights: dict[int, Fraction]
    merged_weights: dict[int, Fraction]
    total_weight: Fraction
    invocations: int
    query_budget: int
    validity: ValidityReport
    wall_time: float = field(default=0.0, compare=False)

    def lines(self, timing: bool = False) -> list[str]:
        out = [
            f"family {self.family} strategy {self.strategy} solver {self.solver}",
            f"rounding grid {self.grid} levels {','.join(map(str, self.levels))}",
        ]
        for v, (old, new) in self.rounding.items():
            if old != new:
                out.append(f"rounded {v} {old} -> {new}")
        for level in sorted(self.constraints, reverse=True):
            out.append(f"level {level} constraints {self.constraints[level]} "
                       f"solver_weight {self.solver_weights[level]} "
                       f"merged_weight {self.merged_weights[level]}")
        out.append(f"constraints_total {self.constraints_total}")
        out.append(f"invocations {self.invocations} budget {self.query_budget}")
        out.append(f"total_weight {self.total_weight}")
        out.append(f"valid {'yes' if self.validity.valid else 'no'}")
        out.extend(f"violation {v}" for v in self.validity.violations)
        if timing:
            out.append(f"wall_time {self.wall_time:.6f}")
        return out


def query_budget(k: int) -> int:
    """floor(log2 k) + 1."""
    return k.bit_length()


def run(g: PriorityGraph, family: Family, strategy: str, solver: Solver, grid: str = HALVING,
        allow_exclusive: bool = False) -> tuple[KPrioritySolution, RunReport]:
    """Round, partition, solve each level, merge; validate against the original priorities."""
    start = time.perf_counter()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == EXCLUSIVE and not family.is_tree and not allow_exclusive:
        raise InvalidStrategyForFamily(
            f"exclusive partitioning does not guarantee valid {family} solutions")
    if not solver.compatible(family):
        raise IncompatibleSolver(f"solver {solver.name!r} cannot produce family {family}")
    terminals = g.terminals(1)
    if not terminals:
        raise NoTerminals("graph has no vertex of priority >= 1")
    comp = next(c for c in components(g) if min(terminals) in c)
    if not terminals <= comp:
        raise Disconnected(sorted(terminals), "terminals are not connected in the input graph")

    rounded = round_up_priorities(g, grid)
    p = partition(rounded.graph, strategy, rounded.levels)
    solved, invocations = solve_levels(rounded.graph, p, solver, family)
    merged = merge_levels(rounded.graph, solved, family)
    solution = rates_from_levels(merged, g.k)
    validity = is_valid_k_priority(g, solution, family)
    per, total = constraint_count(p)
    report = RunReport(
        family=str(family), strategy=strategy, solver=solver.name, grid=grid,
        levels=rounded.levels, rounding=rounded.mapping, constraints=per, constraints_total=total,
        solver_weights={lv: solved[lv].weight for lv in solved},
        merged_weights={lv: merged[lv].weight for lv in merged},
        total_weight=sum((r * g.weights[e] for e, r in solution.rates.items()), Fraction(0)),
        invocations=invocations, query_budget=query_budget(g.k), validity=validity,
        wall_time=time.perf_counter() - start,
    )
    return solution, report
