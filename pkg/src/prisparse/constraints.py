"""Constraint families, k-priority solutions, weight accounting and validity checks."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType

from .errors import GraphError, UnknownEdge
from .graph import (Edge, PriorityGraph, Subgraph, Vertex, components, dijkstra,
                    edge_key, find_cycle)

TREE = "tree"
MULTIPLICATIVE = "mult"
ADDITIVE = "additive"
PRESERVER = "preserver"


@dataclass(frozen=True)
class Family:
    """Which validity predicate a sparsifier must satisfy.

    Use the constructors :meth:`tree`, :meth:`multiplicative`,
    :meth:`additive` and :meth:`preserver`; stretch 1 and additive error 0
    both collapse to the preserver family.
    """

    kind: str
    param: Fraction | None = None

    def __post_init__(self):
        if self.kind not in (TREE, MULTIPLICATIVE, ADDITIVE, PRESERVER):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == MULTIPLICATIVE and (self.param is None or self.param < 1):
            raise ValueError("multiplicative stretch must be >= 1")
        if self.kind == ADDITIVE and (self.param is None or self.param < 0):
            raise ValueError("additive error must be >= 0")

    @classmethod
    def tree(cls) -> "Family":
        return cls(TREE)

    @classmethod
    def preserver(cls) -> "Family":
        return cls(PRESERVER)

    @classmethod
    def multiplicative(cls, alpha) -> "Family":
        alpha = Fraction(alpha)
        return cls(PRESERVER) if alpha == 1 else cls(MULTIPLICATIVE, alpha)

    @classmethod
    def additive(cls, beta) -> "Family":
        beta = Fraction(beta)
        return cls(PRESERVER) if beta == 0 else cls(ADDITIVE, beta)

    @classmethod
    def parse(cls, text: str) -> "Family":
        """Parse ``tree``, ``preserver``, ``mult:<alpha>`` or ``additive:<beta>``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        if name == TREE and not arg:
            return cls.tree()
        if name == PRESERVER and not arg:
            return cls.preserver()
        try:
            if name in (MULTIPLICATIVE, "multiplicative") and arg:
                return cls.multiplicative(Fraction(arg))
            if name in (ADDITIVE, "add") and arg:
                return cls.additive(Fraction(arg))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad family parameter in {text!r}") from exc
        raise ValueError(f"unknown family {text!r}")

    @property
    def is_tree(self) -> bool:
        return self.kind == TREE

    def bound(self, d_g: Fraction) -> Fraction:
        """Largest subgraph distance allowed for a pair at host distance ``d_g``."""
        if self.kind == MULTIPLICATIVE:
            return self.param * d_g
        if self.kind == ADDITIVE:
            return d_g + self.param
        return d_g

    def __str__(self):
        return self.kind if self.param is None else f"{self.kind}:{self.param}"


@dataclass(frozen=True)
class KPrioritySolution:
    """Edge rates in ``1..k``. Level ``i`` is the set of edges of rate >= i."""

    rates: Mapping[Edge, int]
    k: int

    def __post_init__(self):
        clean = {}
        for e, r in self.rates.items():
            if not isinstance(r, int) or not 1 <= r <= self.k:
                raise GraphError(f"rate of {e!r} must lie in [1, {self.k}], got {r!r}")
            clean[edge_key(*e)] = r
        object.__setattr__(self, "rates", MappingProxyType(dict(sorted(clean.items()))))

    def level_edges(self, i: int) -> frozenset:
        return frozenset(e for e, r in self.rates.items() if r >= i)

    def level_subgraph(self, g: PriorityGraph, i: int) -> Subgraph:
        return Subgraph.of(g, self.level_edges(i), g.terminals(i))

    def __eq__(self, other):
        if not isinstance(other, KPrioritySolution):
            return NotImplemented
        return self.k == other.k and dict(self.rates) == dict(other.rates)

    def __hash__(self):
        return hash((self.k, tuple(self.rates.items())))


@dataclass(frozen=True)
class Violation:
    level: int
    kind: str  # "not-subgraph" | "disconnected" | "cycle" | "stray" | "distance"
    vertices: tuple
    required: Fraction | None = None
    actual: Fraction | None = None

    def __str__(self):
        where = ", ".join(map(str, self.vertices))
        text = f"level {self.level}: {self.kind} ({where})"
        if self.required is not None:
            got = "unreachable" if self.actual is None else str(self.actual)
            text += f" required <= {self.required}, actual {got}"
        return text


@dataclass
class ValidityReport:
    levels: dict[int, bool] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(self.levels.values())

    def __bool__(self):
        return self.valid

    def extend(self, other: "ValidityReport") -> None:
        self.levels.update(other.levels)
        self.violations.extend(other.violations)

    def summary(self) -> str:
        lines = [f"level {i}: {'valid' if ok else 'INVALID'}" for i, ok in sorted(self.levels.items())]
        lines.extend(f"  {v}" for v in self.violations)
        return "\n".join(lines)


def solution_weight(g: PriorityGraph, s: KPrioritySolution) -> Fraction:
    """Total weight under the linear rate model: sum of rate(e) * w(e)."""
    total = Fraction(0)
    for e, r in s.rates.items():
        if e not in g.weights:
            raise UnknownEdge(e)
        total += r * g.weights[e]
    return total


def level_weights(g: PriorityGraph, s: KPrioritySolution) -> dict[int, Fraction]:
    """Plain weight of each level subgraph; these sum to :func:`solution_weight`."""
    out = {}
    for i in range(1, s.k + 1):
        out[i] = sum((g.weights[e] for e in s.level_edges(i)), Fraction(0))
    return out


def _as_subgraph(g: PriorityGraph, h) -> Subgraph:
    if isinstance(h, Subgraph):
        return h
    return Subgraph({edge_key(*e): g.weights.get(edge_key(*e)) for e in h},
                    frozenset(x for e in h for x in e))


def is_valid_single(g: PriorityGraph, terminals: Iterable[Vertex], h, family: Family,
                    level: int = 1, pairs: Iterable[tuple] | None = None) -> ValidityReport:
    """Check one level: ``h`` must be a valid ``family`` sparsifier of ``g`` over ``terminals``.

    Every violation is collected rather than stopping at the first one.
    ``pairs`` narrows distance constraints to the given vertex pairs.
    """
    h = _as_subgraph(g, h)
    ts = sorted(set(terminals))
    report = ValidityReport({level: True})

    def fail(kind, vertices, required=None, actual=None):
        report.levels[level] = False
        report.violations.append(Violation(level, kind, tuple(vertices), required, actual))

    for e in sorted(h.weights):
        if g.weights.get(e) is None or h.weights[e] != g.weights[e]:
            fail("not-subgraph", e)
    if not report.valid or not ts:
        return report

    comps = components(h, ts)
    home = next(c for c in comps if ts[0] in c)
    for t in ts[1:]:
        if t not in home:
            fail("disconnected", (ts[0], t))

    if family.is_tree:
        for c in comps:
            if c is not home and any(u in c for u, _ in h.weights):
                fail("stray", sorted(c))
        cycle = find_cycle(e for e in h.weights if e[0] in home)
        if cycle is not None:
            fail("cycle", sorted({x for e in cycle for x in e}))
        return report

    check = [tuple(sorted(p)) for p in pairs] if pairs is not None else list(combinations(ts, 2))
    sources = sorted({u for u, _ in check})
    dist_g = {u: dijkstra(g, u) for u in sources}
    dist_h = {u: dijkstra(h, u) for u in sources}
    for u, v in check:
        d_g = dist_g[u].get(v)
        if d_g is None:
            continue
        d_h = dist_h[u].get(v)
        if d_h is None:
            if pairs is not None:
                fail("disconnected", (u, v))
            continue
        required = family.bound(d_g)
        if d_h > required:
            fail("distance", (u, v), required, d_h)
    return report


def is_valid_k_priority(g: PriorityGraph, s: KPrioritySolution, family: Family) -> ValidityReport:
    """Every level i with a nonempty terminal set must be a valid sparsifier over T_i."""
    report = ValidityReport()
    unknown = [e for e in s.rates if e not in g.weights]
    if unknown:
        report.levels[0] = False
        report.violations.extend(Violation(0, "not-subgraph", e) for e in unknown)
        return report
    for i in range(1, s.k + 1):
        ts = g.terminals(i)
        if not ts:
            continue
        report.extend(is_valid_single(g, ts, s.level_subgraph(g, i), family, level=i))
    return report
