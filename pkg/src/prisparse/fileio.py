"""Line-oriented instance, solution and level file formats.

Instance::

    prisparse-instance v1
    meta name=demo seed=7
    k 2
    v a 2
    e a b 7/2

Solution::

    prisparse-solution v1
    instance sha256:0123456789abcdef
    k 2
    meta family=tree strategy=inclusive solver=exact weight=7
    level 1 7/2
    r a b 2

Weights are exact rationals (``3`` or ``7/2``). ``#`` starts a comment line.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .constraints import KPrioritySolution
from .errors import FormatError, GraphError
from .graph import PriorityGraph, edge_key

INSTANCE_HEADER = "prisparse-instance v1"
SOLUTION_HEADER = "prisparse-solution v1"
LEVEL_HEADER = "prisparse-level v1"

_INT = re.compile(r"-?\d+\Z")


def _token(v) -> str:
    s = str(v)
    if not s or any(c.isspace() for c in s) or s.startswith("#"):
        raise GraphError(f"vertex id {v!r} cannot be serialised")
    return s


def _rational(text: str, line: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational {text!r}", line) from None


def _meta(tokens: list[str], line: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq or not key:
            raise FormatError(f"bad meta entry {tok!r}", line)
        out[key] = value
    return out


def _lines(text: str, header: str):
    rows = [(i, raw.strip()) for i, raw in enumerate(text.splitlines(), 1)]
    rows = [(i, s) for i, s in rows if s and not s.startswith("#")]
    if not rows or rows[0][1] != header:
        raise FormatError(f"expected header {header!r}", rows[0][0] if rows else 1)
    for i, s in rows[1:]:
        yield i, s.split()


def dump_instance(g: PriorityGraph, meta: dict | None = None) -> str:
    out = [INSTANCE_HEADER]
    if meta:
        out.append("meta " + " ".join(f"{key}={meta[key]}" for key in sorted(meta)))
    out.append(f"k {g.k}")
    out.extend(f"v {_token(v)} {g.priority[v]}" for v in g.vertices)
    out.extend(f"e {_token(u)} {_token(v)} {w}" for (u, v), w in g.weights.items())
    return "\n".join(out) + "\n"


def load_instance(text: str) -> tuple[PriorityGraph, dict[str, str]]:
    meta: dict[str, str] = {}
    k = None
    verts: dict[str, tuple[int, int]] = {}
    raw_edges = []
    for line, tok in _lines(text, INSTANCE_HEADER):
        kind = tok[0]
        if kind == "meta":
            meta.update(_meta(tok[1:], line))
        elif kind == "k" and len(tok) == 2 and _INT.match(tok[1]):
            k = int(tok[1])
        elif kind == "v" and len(tok) == 3 and _INT.match(tok[2]):
            if tok[1] in verts:
                raise FormatError(f"duplicate vertex {tok[1]!r}", line)
            verts[tok[1]] = (int(tok[2]), line)
        elif kind == "e" and len(tok) == 4:
            raw_edges.append((tok[1], tok[2], _rational(tok[3], line), line))
        else:
            raise FormatError(f"unrecognised line {' '.join(tok)!r}", line)
    numeric = all(_INT.match(v) for v in verts)
    conv = int if numeric else str
    priority = {conv(v): p for v, (p, _) in verts.items()}
    edges = {}
    for u, v, w, line in raw_edges:
        for x in (u, v):
            if x not in verts:
                raise FormatError(f"edge references undeclared vertex {x!r}", line)
        try:
            key = edge_key(conv(u), conv(v))
        except GraphError as exc:
            raise FormatError(str(exc), line) from None
        if key in edges:
            raise FormatError(f"parallel edge {key!r}", line)
        if w <= 0:
            raise FormatError(f"edge weight must be positive, got {w}", line)
        edges[key] = w
    if k is None:
        k = max(max(priority.values(), default=1), 1)
    for v, (p, line) in verts.items():
        if not 0 <= p <= k:
            raise FormatError(f"priority {p} of {v!r} outside [0, {k}]", line)
    try:
        g = PriorityGraph(edges, priority, k)
    except GraphError as exc:
        raise FormatError(str(exc)) from None
    return g, meta


def instance_hash(g: PriorityGraph) -> str:
    digest = hashlib.sha256(dump_instance(g).encode()).hexdigest()
    return f"sha256:{digest[:16]}"


def read_instance(path) -> tuple[PriorityGraph, dict[str, str]]:
    return load_instance(Path(path).read_text())


def write_instance(path, g: PriorityGraph, meta: dict | None = None) -> None:
    Path(path).write_text(dump_instance(g, meta))


@dataclass
class SolutionFile:
    instance: str
    solution: KPrioritySolution
    weight: Fraction
    level_weights: dict[int, Fraction] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def dump(self) -> str:
        meta = dict(self.meta)
        meta["weight"] = str(self.weight)
        out = [SOLUTION_HEADER, f"instance {self.instance}", f"k {self.solution.k}",
               "meta " + " ".join(f"{key}={meta[key]}" for key in sorted(meta))]
        out.extend(f"level {i} {w}" for i, w in sorted(self.level_weights.items()))
        out.extend(f"r {_token(u)} {_token(v)} {r}" for (u, v), r in self.solution.rates.items())
        return "\n".join(out) + "\n"


def load_solution(text: str, g: PriorityGraph | None = None) -> SolutionFile:
    """Parse a solution; with ``g`` the vertex tokens are mapped to ``g``'s vertex ids."""
    lookup = {str(v): v for v in g.vertices} if g is not None else None
    instance = None
    k = None
    meta: dict[str, str] = {}
    levels: dict[int, Fraction] = {}
    rates = {}
    for line, tok in _lines(text, SOLUTION_HEADER):
        kind = tok[0]
        if kind == "instance" and len(tok) == 2:
            instance = tok[1]
        elif kind == "k" and len(tok) == 2 and _INT.match(tok[1]):
            k = int(tok[1])
        elif kind == "meta":
            meta.update(_meta(tok[1:], line))
        elif kind == "level" and len(tok) == 3 and _INT.match(tok[1]):
            levels[int(tok[1])] = _rational(tok[2], line)
        elif kind == "r" and len(tok) == 4 and _INT.match(tok[3]):
            u, v = tok[1], tok[2]
            if lookup is not None:
                if u not in lookup or v not in lookup:
                    raise FormatError(f"rate line references unknown vertex in {tok!r}", line)
                u, v = lookup[u], lookup[v]
            try:
                key = edge_key(u, v)
            except GraphError as exc:
                raise FormatError(str(exc), line) from None
            if key in rates:
                raise FormatError(f"duplicate rate for {key!r}", line)
            rates[key] = int(tok[3])
        else:
            raise FormatError(f"unrecognised line {' '.join(tok)!r}", line)
    if instance is None or k is None or "weight" not in meta:
        raise FormatError("solution needs 'instance', 'k' and 'meta weight=' lines")
    weight = _rational(meta.pop("weight"), None)
    try:
        solution = KPrioritySolution(rates, k)
    except GraphError as exc:
        raise FormatError(str(exc)) from None
    return SolutionFile(instance, solution, weight, levels, meta)


def dump_level(sol: SolutionFile, level: int) -> str:
    out = [LEVEL_HEADER, f"instance {sol.instance}", f"level {level}"]
    out.extend(f"r {_token(u)} {_token(v)} {r}" for (u, v), r in sol.solution.rates.items()
               if r >= level)
    return "\n".join(out) + "\n"


def load_level(text: str) -> tuple[int, dict[tuple, int]]:
    level = None
    rates = {}
    for line, tok in _lines(text, LEVEL_HEADER):
        if tok[0] == "level" and len(tok) == 2:
            level = int(tok[1])
        elif tok[0] == "r" and len(tok) == 4:
            rates[(tok[1], tok[2])] = int(tok[3])
        elif tok[0] != "instance":
            raise FormatError(f"unrecognised line {' '.join(tok)!r}", line)
    if level is None:
        raise FormatError("missing level line")
    return level, rates
