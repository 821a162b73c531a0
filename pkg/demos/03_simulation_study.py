"""
A small Monte-Carlo study
=========================

Plant a 20 x 30 block of cross correlations in [0.3, 0.4], sample 20
data sets and score each fit. The shipped configs in ``configs/`` run the
same thing at 100 data sets; this script keeps it to a few seconds.
"""

from gcca.estimation import GccaConfig
from gcca.evalmetrics import convergence_study, format_tables, run_study
from gcca.synthgen import SimConfig, build_truth

sim = SimConfig(n=500, p=1000, q=1500, block_rows=20, block_cols=30,
                rho_lo=0.3, rho_hi=0.4, seed=2024, replicates=20)
cfg = GccaConfig(epsilon=0.15, max_subgraphs=1)

truth = build_truth(sim)
print("population canonical correlation:", round(truth.rho_c_pop, 4))
print("planted block min/max:", truth.sigma_xy_block.min().round(3),
      truth.sigma_xy_block.max().round(3))

report = run_study(sim, cfg)
print(format_tables([report]))

# per data set detail
for row in report.per_replicate[:5]:
    print(row["replicate"], row["lambda_star"], row["n_i_x"], row["n_i_y"],
          round(row["rho_hat"], 4))

###############################################################################
# RMSE of rho_hat should shrink like n^(-1/2). A reduced problem keeps this
# quick. With only 10 data sets per n the slope scatters around -0.5 by
# roughly 0.1 from seed to seed.

small = sim.with_(p=300, q=400, replicates=10)
conv = convergence_study(small, [250, 500, 1000, 2000], cfg)
for n, e in zip(conv.n_values, conv.rmse):
    print(f"n={n:5d}  rmse={e:.4f}")
print(f"log-log slope: {conv.slope:.3f}")
