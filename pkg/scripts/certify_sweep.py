"""Approximation-ratio sweep against the exact optimum.

Runs every (family, strategy, solver) combination over seeded desk-scale
instances and prints one row per combination: min/mean/max ratio, the
theoretical bound when one exists, validity failures and the worst
solver-invocation count relative to floor(log2 k) + 1.

    python3 scripts/certify_sweep.py --count 200 --seed 0
"""

import argparse
import random
import time
from fractions import Fraction

from prisparse import INCLUSIVE, PAIRWISE, Family, certify_ratio
from prisparse.cli import make_solver
from prisparse.generate import PRIORITY_DISTS, small_instance
from prisparse.pipeline import GRIDS, HALVING

COMBOS = [
    ("tree", "exact"),
    ("tree", "steiner2approx"),
    ("mult:3", "exact"),
    ("mult:3", "subset"),
    ("additive:2", "exact"),
    ("additive:2", "pathgreedy"),
    ("preserver", "pathgreedy"),
]


def sweep(family, solver_name, strategy, args):
    rng = random.Random(args.seed)
    solver = make_solver(solver_name)
    ratios, invalid, over = [], 0, 0
    for _ in range(args.count):
        n = rng.randint(3, args.max_n)
        m = rng.randint(n - 1, min(args.max_edges, n * (n - 1) // 2))
        g = small_instance(rng, n, m, rng.choice(args.k_values), args.priority_dist)
        cert = certify_ratio(g, Family.parse(family), strategy, solver, grid=args.grid)
        ratios.append(cert.ratio)
        invalid += not cert.report.validity.valid
        over = max(over, cert.report.invocations - cert.report.query_budget)
    bound = None if solver.ratio is None else 4 * Fraction(solver.ratio)
    return ratios, bound, invalid, over


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--max-edges", type=int, default=11)
    ap.add_argument("--k-values", type=lambda s: [int(x) for x in s.split(",")], default=[2, 3, 4])
    ap.add_argument("--priority-dist", choices=PRIORITY_DISTS, default="uniform")
    ap.add_argument("--grid", choices=GRIDS, default=HALVING)
    args = ap.parse_args()

    print(f"{'family':<11} {'strategy':<9} {'solver':<14} {'min':>6} {'mean':>6} {'max':>6} "
          f"{'bound':>5} {'invalid':>7} {'budget+':>7} {'sec':>5}")
    for family, solver in COMBOS:
        for strategy in (INCLUSIVE, PAIRWISE):
            start = time.perf_counter()
            ratios, bound, invalid, over = sweep(family, solver, strategy, args)
            mean = sum(ratios, Fraction(0)) / len(ratios)
            print(f"{family:<11} {strategy:<9} {solver:<14} {float(min(ratios)):6.3f} "
                  f"{float(mean):6.3f} {float(max(ratios)):6.3f} {str(bound or '-'):>5} "
                  f"{invalid:7d} {over:7d} {time.perf_counter() - start:5.1f}")


if __name__ == "__main__":
    main()
