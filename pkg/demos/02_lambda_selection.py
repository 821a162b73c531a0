"""
Choosing the size exponent
==========================

Small ``lam`` rewards large blocks, large ``lam`` rewards dense ones. The
candidate whose bicliques best separate the inside edge rate from the
outside rate wins. Here we fit the bundled toy data and print the whole
score table.
"""

from gcca.datasets import load_toy
from gcca.estimation import GccaConfig, fit

x, y, truth = load_toy()
print(f"X: {x.values.shape}, Y: {y.values.shape}")
print("planted X vars:", truth["i_x"])
print("planted Y vars:", truth["i_y"])

result = fit(x, y, GccaConfig(epsilon=0.2))

print(f"{'lambda':>6} {'pi1':>6} {'pi0':>6} {'divergence':>11} {'|I_X|':>5} {'|I_Y|':>5}")
for s in result.diagnostics:
    row = s.row()
    star = " *" if s.lam == result.lambda_star else ""
    print(f"{s.lam:6.2f} {s.pi1:6.3f} {s.pi0:6.3f} {s.divergence:11.3f}"
          f" {row['n_i_x']:5d} {row['n_i_y']:5d}{star}")

###############################################################################
# The selected variables and the canonical correlation on them.

print("selected X:", [x.column_names[i] for i in result.i_x])
print("selected Y:", [y.column_names[j] for j in result.i_y])
print(f"rho_hat = {result.rho_hat:.4f}  (population value {truth['rho_c_pop']:.4f})")

# loadings, largest entry of a_hat is positive by convention
for name, w in zip((x.column_names[i] for i in result.i_x), result.a_hat):
    print(f"  {name:8s} {w:+.3f}")
