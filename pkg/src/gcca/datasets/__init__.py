"""Small bundled datasets."""
import json
from importlib import resources

from ..data import read_csv

# parameters used to generate the toy files with gcca.synthgen
TOY_CONFIG = dict(n=200, p=40, q=30, block_rows=6, block_cols=5, rho_lo=0.4, rho_hi=0.6,
                  seed=11, replicates=1)


def toy_paths():
    root = resources.files(__name__)
    return root / "toy_x.csv", root / "toy_y.csv", root / "toy_truth.json"


def load_toy():
    """Return ``(x, y, truth)`` for the planted-block toy example."""
    px, py, pt = toy_paths()
    return read_csv(px), read_csv(py), json.loads(pt.read_text())
