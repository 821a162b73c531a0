"""
Greedy exclusion on a 5 x 4 graph
=================================

A tiny truncated correlation graph with a strong 2 x 2 block in its top-left
corner. We watch the sweep drop one row or column at a time and see where
the objective peaks.
"""

import numpy as np

from gcca.data import truncate
from gcca.extraction import extract_one
from gcca.oracle import exhaustive_best_biclique, figure2_instance

r, block_rows, block_cols = figure2_instance()
graph = truncate(r, epsilon=0.2)
print(graph.r_trunc)

# every step drops the row or column with the smallest mean
biclique, traj = extract_one(graph, range(5), range(4), lam=0.5)

print(f"{'t':>2} {'drop':>7} {'index':>5} {'objective':>10}")
print(f"{0:>2} {'-':>7} {'-':>5} {traj.objectives[0]:10.4f}")
for t, kind, idx, obj in traj.steps:
    mark = "  <- best" if t == traj.argmax_time else ""
    print(f"{t:>2} {kind:>7} {idx:>5} {obj:10.4f}{mark}")

print("rows", biclique.u, "cols", biclique.v, "score", round(biclique.score, 4))

# brute force over all 31 x 15 nonempty row/column subsets agrees
best = exhaustive_best_biclique(graph, 0.5)
print("exhaustive:", best.best_u, best.best_v, f"({best.enumerated} pairs checked)")
assert (best.best_u, best.best_v) == (biclique.u, biclique.v)

###############################################################################
# With no signal at all every state scores zero and the latest state wins,
# which leaves a single row.

flat = truncate(np.zeros((5, 4)), 0.2)
b, _ = extract_one(flat, range(5), range(4), lam=0.5)
print("all-zero graph ->", b.u, b.v)
