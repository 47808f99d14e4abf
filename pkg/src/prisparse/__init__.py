"""Multi-priority graph sparsification by rounding priorities and merging per-level solutions."""

from .constraints import (Family, KPrioritySolution, ValidityReport, Violation, is_valid_k_priority,
                          is_valid_single, level_weights, solution_weight)
from .errors import (BudgetExceeded, Disconnected, FormatError, GraphError, IncompatibleSolver,
                     Infeasible, InvalidStrategyForFamily, NoTerminals, PrisparseError,
                     PruningDisconnected, Unreachable, UnknownEdge)
from .graph import (MetricClosure, PriorityGraph, Subgraph, edge_key, metric_closure,
                    minimum_spanning_tree, shortest_path)
from .oracle import (ExactSolver, OracleBudget, certify_ratio, dreyfus_wagner, exact_k_priority,
                     exact_single_priority)
from .pipeline import (EXCLUSIVE, INCLUSIVE, PAIRWISE, Partitioning, RunReport, constraint_count,
                       merge, merge_levels, partition, round_up_priorities, rounding_levels, run,
                       solve_levels)
from .solvers import (GreedySpanner, PathGreedy, SteinerMst2Approx, SubsetSpannerClosure,
                      greedy_spanner, path_greedy, steiner_mst_2approx, subset_spanner_closure)

__version__ = "0.1.0"
