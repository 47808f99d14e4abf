"""``prisparse`` command line: solve, validate, gen, certify, levels.

Exit codes: 0 success, 1 invalid solution or failed certification, 2 parse
or usage error, 3 strategy/solver not allowed for the family, 4 terminals
disconnected, 5 declared weight does not match the recomputed weight.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from .constraints import Family, is_valid_k_priority, level_weights, solution_weight
from .errors import (BudgetExceeded, Disconnected, FormatError, IncompatibleSolver,
                     InvalidStrategyForFamily, NoTerminals, UnknownEdge)
from .fileio import (SolutionFile, dump_instance, dump_level, instance_hash, load_solution,
                     read_instance)
from .generate import PRIORITY_DISTS, random_instance, small_instance
from .oracle import ExactSolver, OracleBudget, certify_ratio
from .pipeline import GRIDS, HALVING, STRATEGIES, run
from .solvers import GreedySpanner, PathGreedy, SteinerMst2Approx, SubsetSpannerClosure

SOLVERS = ("steiner2approx", "exact", "greedy", "subset", "pathgreedy")


def make_solver(spec: str, budget: OracleBudget | None = None):
    """``steiner2approx``, ``exact``, ``greedy[:alpha]``, ``subset[:alpha]`` or ``pathgreedy``."""
    name, _, arg = spec.partition(":")
    alpha = Fraction(arg) if arg else None
    if name == "steiner2approx" and not arg:
        return SteinerMst2Approx()
    if name == "exact" and not arg:
        return ExactSolver(budget or OracleBudget())
    if name == "greedy":
        return GreedySpanner(alpha)
    if name == "subset":
        return SubsetSpannerClosure(alpha)
    if name == "pathgreedy" and not arg:
        return PathGreedy()
    raise ValueError(f"unknown solver {spec!r}")


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dims(text: str) -> tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        return int(r), int(c)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must look like 3x3, got {text!r}") from None


def _out(text: str, out) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


def cmd_solve(args, out) -> int:
    g, meta = read_instance(args.instance)
    solver = make_solver(args.solver, OracleBudget(max_states=args.budget))
    solution, report = run(g, args.family, args.strategy, solver, grid=args.grid,
                           allow_exclusive=args.allow_exclusive)
    ref = instance_hash(g)
    sol = SolutionFile(ref, solution, report.total_weight, level_weights(g, solution),
                       {"family": str(args.family), "strategy": args.strategy,
                        "solver": args.solver, "grid": args.grid})
    Path(args.out).write_text(sol.dump())
    lines = [f"instance {ref}"] + report.lines(timing=args.timing)
    _out("\n".join(lines), out)
    return 0 if report.validity.valid else 1


def cmd_validate(args, out) -> int:
    g, _ = read_instance(args.instance)
    sol = load_solution(Path(args.solution).read_text(), g)
    if sol.instance != instance_hash(g):
        raise FormatError(f"solution references {sol.instance}, instance is {instance_hash(g)}")
    family = Family.parse(sol.meta.get("family", "tree"))
    try:
        weight = solution_weight(g, sol.solution)
    except UnknownEdge as exc:
        _out(f"error: {exc}", out)
        return 1
    per_level = level_weights(g, sol.solution)
    if weight != sol.weight or any(per_level.get(i) != w for i, w in sol.level_weights.items()):
        _out(f"weight mismatch: declared {sol.weight}, recomputed {weight}", out)
        return 5
    report = is_valid_k_priority(g, sol.solution, family)
    _out(f"family {family} weight {weight}", out)
    _out(report.summary(), out)
    _out(f"valid {'yes' if report.valid else 'no'}", out)
    return 0 if report.valid else 1


def cmd_gen(args, out) -> int:
    g, meta = random_instance(args.model, n=args.n, p=args.p, dims=args.dims, k=args.k,
                              priority_dist=args.priority_dist, seed=args.seed,
                              max_weight=args.max_weight)
    text = dump_instance(g, meta)
    if args.out:
        Path(args.out).write_text(text)
    else:
        _out(text, out)
    return 0


def cmd_certify(args, out) -> int:
    rng = random.Random(args.seed)
    budget = OracleBudget(max_edges=args.max_edges, max_states=args.budget)
    solver = make_solver(args.solver, budget)
    ratios, failures, skipped, over_budget = [], [], 0, 0
    bound = None
    _out(f"certify family={args.family} strategy={args.strategy} solver={args.solver} "
         f"grid={args.grid} seed={args.seed}", out)
    for i in range(args.count):
        n = rng.randint(3, args.max_n)
        m = rng.randint(n - 1, min(args.max_edges, n * (n - 1) // 2))
        k = rng.choice(args.k_values)
        g = small_instance(rng, n, m, k, args.priority_dist)
        try:
            cert = certify_ratio(g, args.family, args.strategy, solver, budget, args.grid)
        except BudgetExceeded as exc:
            skipped += 1
            _out(f"skip {i}: {exc}", out)
            continue
        ratios.append(cert.ratio)
        bound = cert.bound
        if cert.report.invocations > cert.report.query_budget:
            over_budget += 1
        if cert.verdict is False or not cert.report.validity.valid:
            failures.append(i)
            _out(f"fail {i}: ratio {cert.ratio} alg {cert.alg_weight} opt {cert.opt_weight} "
                 f"valid {cert.report.validity.valid}", out)
        if args.verbose:
            _out(f"instance {i} n={n} m={len(g.edges)} k={k} ratio={cert.ratio}", out)
    _out(f"instances {args.count} certified {len(ratios)} skipped {skipped}", out)
    if ratios:
        mean = sum(ratios, Fraction(0)) / len(ratios)
        _out(f"ratio min {min(ratios)} mean {float(mean):.6f} max {max(ratios)}", out)
    _out(f"bound {bound if bound is not None else 'none'} failures {len(failures)} "
         f"query_budget_violations {over_budget}", out)
    ok = not failures and not over_budget
    _out(f"result {'PASS' if ok else 'FAIL'}", out)
    return 0 if ok else 1


def cmd_levels(args, out) -> int:
    sol = load_solution(Path(args.solution).read_text())
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for level in range(1, sol.solution.k + 1):
        path = outdir / f"level_{level}.txt"
        path.write_text(dump_level(sol, level))
        _out(f"level {level} edges {len(sol.solution.level_edges(level))} -> {path.name}", out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prisparse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the k-priority approximation on an instance")
    p.add_argument("instance")
    p.add_argument("--family", type=_family, default=Family.tree())
    p.add_argument("--strategy", choices=STRATEGIES, default="inclusive")
    p.add_argument("--solver", default="steiner2approx")
    p.add_argument("--grid", choices=GRIDS, default=HALVING)
    p.add_argument("--allow-exclusive", action="store_true",
                   help="permit exclusive partitioning for distance families")
    p.add_argument("--budget", type=int, default=OracleBudget().max_states)
    p.add_argument("--timing", action="store_true", help="append wall time to the report")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a solution file against its instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--model", choices=("er", "grid", "star"), default="er")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--dims", type=_dims, default=(3, 3))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--priority-dist", choices=PRIORITY_DISTS, default="uniform")
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("certify", help="compare against the exact optimum on random instances")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--budget", type=int, default=OracleBudget().max_states)
    p.add_argument("--family", type=_family, default=Family.tree())
    p.add_argument("--strategy", choices=STRATEGIES, default="inclusive")
    p.add_argument("--solver", default="exact")
    p.add_argument("--grid", choices=GRIDS, default=HALVING)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--max-edges", type=int, default=11)
    p.add_argument("--k-values", type=lambda s: [int(x) for x in s.split(",")], default=[2, 3, 4])
    p.add_argument("--priority-dist", choices=PRIORITY_DISTS, default="uniform")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("levels", help="write one nested edge-list file per level")
    p.add_argument("solution")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_levels)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvalidStrategyForFamily, IncompatibleSolver) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (Disconnected, NoTerminals) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
