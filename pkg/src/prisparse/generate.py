"""Seeded random instances: Erdos-Renyi, grids, stars, and small oracle-sized graphs."""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import PriorityGraph, _DisjointSet

PRIORITY_DISTS = ("uniform", "terminals")


def sample_priorities(rng: random.Random, n: int, k: int, dist: str = "uniform") -> list[int]:
    """``uniform`` draws from 0..k, ``terminals`` from 1..k."""
    if dist == "uniform":
        return [rng.randint(0, k) for _ in range(n)]
    if dist == "terminals":
        return [rng.randint(1, k) for _ in range(n)]
    raise ValueError(f"unknown priority distribution {dist!r}")


def _connect(n: int, edges: set) -> int:
    """Join components with extra edges; returns how many were added."""
    ds = _DisjointSet(range(n))
    for u, v in edges:
        ds.union(u, v)
    added = 0
    reps = sorted({ds.find(x) for x in range(n)})
    for a, b in zip(reps, reps[1:]):
        edges.add((a, b))
        ds.union(a, b)
        added += 1
    return added


def _ensure_terminal(priority: list[int], k: int) -> int:
    if any(priority):
        return 0
    priority[0] = k
    return 1


def random_instance(model: str, n: int = 8, p: float = 0.5, dims: tuple[int, int] = (3, 3),
                    k: int = 2, priority_dist: str = "uniform", seed: int = 0,
                    max_weight: int = 1) -> tuple[PriorityGraph, dict]:
    """Build a connected instance; metadata records any repairs made."""
    if k < 1 or max_weight < 1:
        raise ValueError("k and max_weight must be >= 1")
    rng = random.Random(seed)
    meta = {"model": model, "seed": str(seed), "k": str(k), "dist": priority_dist}
    if model == "er":
        if n < 1 or not 0 <= p <= 1:
            raise ValueError("er needs n >= 1 and 0 <= p <= 1")
        edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
        meta["p"] = str(p)
        meta["augmented"] = str(_connect(n, edges))
    elif model == "grid":
        rows, cols = dims
        if rows < 1 or cols < 1:
            raise ValueError("grid dimensions must be positive")
        n = rows * cols
        edges = set()
        for r in range(rows):
            for c in range(cols):
                x = r * cols + c
                if c + 1 < cols:
                    edges.add((x, x + 1))
                if r + 1 < rows:
                    edges.add((x, x + cols))
        meta["dims"] = f"{rows}x{cols}"
    elif model == "star":
        if n < 2:
            raise ValueError("star needs n >= 2")
        edges = {(0, v) for v in range(1, n)}
    else:
        raise ValueError(f"unknown model {model!r}")
    meta["n"] = str(n)
    meta["name"] = f"{model}-n{n}-k{k}-s{seed}"
    priority = sample_priorities(rng, n, k, priority_dist)
    meta["forced_terminal"] = str(_ensure_terminal(priority, k))
    weights = {e: rng.randint(1, max_weight) for e in sorted(edges)}
    g = PriorityGraph(weights, dict(enumerate(priority)), k, vertices=range(n))
    return g, meta


def small_instance(rng: random.Random, n: int, m: int, k: int,
                   priority_dist: str = "uniform", halves: bool = True) -> PriorityGraph:
    """Random connected graph with ``n`` vertices and ``min(m, C(n,2))`` edges.

    A random spanning tree guarantees connectivity; weights are drawn from
    {1..8} and, with ``halves``, optionally halved to exercise exact rationals.
    """
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    rest = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(rest)
    edges.update(rest[:max(0, m - len(edges))])
    weights = {}
    for e in sorted(edges):
        w = Fraction(rng.randint(1, 8), rng.choice((1, 2)) if halves else 1)
        weights[e] = w
    priority = sample_priorities(rng, n, k, priority_dist)
    _ensure_terminal(priority, k)
    return PriorityGraph(weights, dict(enumerate(priority)), k, vertices=range(n))
