"""
Fit at methylation / expression scale
=====================================

278 subjects, 6427 CpG sites and 8196 genes, synthetic. The planted
block is 200 x 300. Expect one to two minutes and under 2 GB of memory.
"""

import time

from gcca.estimation import GccaConfig, fit
from gcca.evalmetrics import score_recovery
from gcca.synthgen import SimConfig, build_truth, sample

sim = SimConfig(n=278, p=6427, q=8196, block_rows=200, block_cols=300,
                rho_lo=0.3, rho_hi=0.5, seed=5, replicates=1)
truth = build_truth(sim)
x, y = sample(truth, sim, 0)

t0 = time.perf_counter()
result = fit(x, y, GccaConfig())  # defaults: epsilon 0.2, up to 5 bicliques
print(f"fit took {time.perf_counter() - t0:.0f} s")

print("lambda*:", result.lambda_star)
print("biclique sizes:", [b.size for b in result.subgraphs])
score = score_recovery(truth.i_x, truth.i_y, result.i_x, result.i_y, sim.p, sim.q)
print(f"sensitivity {score.sensitivity:.3f}, specificity {score.specificity:.4f}")
print(f"rho_hat {result.rho_hat:.4f} vs population {truth.rho_c_pop:.4f}")

# mean signed correlation of each block pair, the sign pattern of the association
for row in result.block_signs:
    print(" ".join(f"{v:+.3f}" for v in row))
