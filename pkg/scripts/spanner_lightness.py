"""Empirical stretch and lightness of the greedy spanner and the subset spanner.

For each t, reports the worst observed w(H)/w(MST) next to the 1 + n/(2t)
reference bound, and the worst observed stretch against alpha = 2t - 1.
t = 1 is included as a probe: the output is then a distance preserver.

    python3 scripts/spanner_lightness.py --graphs 100 --max-n 30
"""

import argparse
import random
from fractions import Fraction

import networkx as nx

from prisparse import greedy_spanner, metric_closure, minimum_spanning_tree, subset_spanner_closure
from prisparse.generate import random_instance


def lengths(nodes, weights):
    h = nx.Graph()
    h.add_nodes_from(nodes)
    h.add_edges_from((u, v, {"weight": w}) for (u, v), w in weights.items())
    return dict(nx.all_pairs_dijkstra_path_length(h))


def stretch(dg, dh, pairs):
    return max((dh[u][v] / dg[u][v] for u, v in pairs), default=Fraction(1))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=100)
    ap.add_argument("--max-n", type=int, default=30)
    ap.add_argument("--t-values", type=lambda s: [int(x) for x in s.split(",")], default=[1, 2, 3])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    stats = {t: {"light": 0.0, "slack": 0.0, "stretch": Fraction(0), "sub_light": 0.0,
                 "sub_stretch": Fraction(0), "over": 0} for t in args.t_values}
    for _ in range(args.graphs):
        n = rng.randint(5, args.max_n)
        g, _ = random_instance("er", n=n, p=rng.uniform(0.1, 0.7), k=1,
                               seed=rng.randrange(10 ** 6), max_weight=rng.choice([1, 10, 100]))
        dg = lengths(g.vertices, g.weights)
        pairs = [(u, v) for i, u in enumerate(g.vertices) for v in g.vertices[i + 1:]]
        mst = minimum_spanning_tree(g).weight
        ts = sorted(rng.sample(g.vertices, rng.randint(2, n)))
        closure_mst = minimum_spanning_tree(metric_closure(g, ts).weights).weight
        for t in args.t_values:
            s = stats[t]
            h = greedy_spanner(g, 2 * t - 1)
            ratio = h.weight / mst
            s["light"] = max(s["light"], float(ratio))
            s["slack"] = max(s["slack"], float(ratio / (1 + Fraction(n, 2 * t))))
            s["over"] += ratio > 1 + Fraction(n, 2 * t)
            s["stretch"] = max(s["stretch"], stretch(dg, lengths(g.vertices, h.weights), pairs))
            hs = subset_spanner_closure(g, ts, 2 * t - 1)
            sub_pairs = [(u, v) for i, u in enumerate(ts) for v in ts[i + 1:]]
            s["sub_stretch"] = max(s["sub_stretch"],
                                   stretch(dg, lengths(g.vertices, hs.weights), sub_pairs))
            s["sub_light"] = max(s["sub_light"], float(hs.weight / closure_mst))

    print(f"{'t':>2} {'alpha':>5} {'stretch':>8} {'w/MST':>7} {'/bound':>7} {'over':>5} "
          f"{'sub stretch':>11} {'sub w/MST':>9}")
    for t, s in stats.items():
        print(f"{t:>2} {2 * t - 1:>5} {float(s['stretch']):8.3f} {s['light']:7.3f} "
              f"{s['slack']:7.3f} {s['over']:5d} {float(s['sub_stretch']):11.3f} {s['sub_light']:9.3f}")


if __name__ == "__main__":
    main()
