"""Synthetic Gaussian data with one planted cross-correlation biclique.

A single latent factor ``Z`` drives the planted variables::

    X_i = alpha_i * Z + sqrt(1 - alpha_i**2) * e_i      (i in I_X)
    Y_j = beta_j  * Z + sqrt(1 - beta_j**2)  * f_j      (j in I_Y)

and every other variable is pure noise. All variances are 1, the cross
correlation is ``alpha_i * beta_j`` on ``I_X x I_Y`` and 0 elsewhere, and the
joint covariance is PSD by construction. The price is within-block
correlation ``alpha_i * alpha_k`` among the planted X variables (likewise
for Y).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, replace
from typing import Tuple

import numpy as np

from .data import RawMatrix


@dataclass(frozen=True)
class SimConfig:
    n: int = 500
    p: int = 1000
    q: int = 1500
    block_rows: int = 20
    block_cols: int = 30
    rho_lo: float = 0.3
    rho_hi: float = 0.4
    seed: int = 0
    replicates: int = 100

    def __post_init__(self):
        if not 0 < self.rho_lo <= self.rho_hi < 1:
            raise ValueError("need 0 < rho_lo <= rho_hi < 1")
        if not (1 <= self.block_rows <= self.p and 1 <= self.block_cols <= self.q):
            raise ValueError("planted block does not fit in p x q")
        if self.n < 4:
            raise ValueError("n must be >= 4")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")

    def with_(self, **kw) -> "SimConfig":
        return replace(self, **kw)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class PlantedTruth:
    i_x: Tuple[int, ...]
    i_y: Tuple[int, ...]
    alpha: np.ndarray
    beta: np.ndarray
    sigma_xy_block: np.ndarray
    rho_c_pop: float

    def to_dict(self) -> dict:
        return {"i_x": list(self.i_x), "i_y": list(self.i_y), "alpha": self.alpha.tolist(),
                "beta": self.beta.tolist(), "rho_c_pop": self.rho_c_pop}


def _rng(seed: int, *key: int) -> np.random.Generator:
    # stream identity depends only on (seed, key), never on call order
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def population_blocks(alpha, beta):
    """Population ``Sigma_X0``, ``Sigma_Y0`` and ``Sigma_X0Y0`` of the planted variables."""
    alpha, beta = np.asarray(alpha, float), np.asarray(beta, float)
    sx = np.outer(alpha, alpha)
    np.fill_diagonal(sx, 1.0)
    sy = np.outer(beta, beta)
    np.fill_diagonal(sy, 1.0)
    return sx, sy, np.outer(alpha, beta)


def population_rho(sigma_x, sigma_y, sigma_xy) -> float:
    """Population analog of the sample estimator: leading singular pair of
    ``sigma_xy``, normalized by the population quadratic forms."""
    u, s, vt = np.linalg.svd(sigma_xy)
    a, b = u[:, 0], vt[0]
    num = a @ sigma_xy @ b
    return float(abs(num) / np.sqrt((a @ sigma_x @ a) * (b @ sigma_y @ b)))


def build_truth(config: SimConfig) -> PlantedTruth:
    rng = _rng(config.seed, 0)
    i_x = np.sort(rng.choice(config.p, config.block_rows, replace=False))
    i_y = np.sort(rng.choice(config.q, config.block_cols, replace=False))
    lo, hi = np.sqrt(config.rho_lo), np.sqrt(config.rho_hi)
    alpha = rng.uniform(lo, hi, config.block_rows)
    beta = rng.uniform(lo, hi, config.block_cols)
    sx, sy, sxy = population_blocks(alpha, beta)
    # keep products inside the stated range despite sqrt/multiply rounding
    sxy = np.clip(sxy, config.rho_lo, config.rho_hi)
    return PlantedTruth(tuple(int(i) for i in i_x), tuple(int(j) for j in i_y),
                        alpha, beta, sxy, population_rho(sx, sy, sxy))


def sample(truth: PlantedTruth, config: SimConfig, replicate: int) -> Tuple[RawMatrix, RawMatrix]:
    """Draw replicate ``replicate``; the stream is keyed by (seed, replicate)."""
    if not 0 <= replicate < config.replicates:
        raise ValueError(f"replicate {replicate} outside [0, {config.replicates})")
    rng = _rng(config.seed, 1, replicate)
    n = config.n
    z = rng.standard_normal(n)
    x = rng.standard_normal((n, config.p))
    y = rng.standard_normal((n, config.q))
    ix, iy = list(truth.i_x), list(truth.i_y)
    x[:, ix] = np.outer(z, truth.alpha) + x[:, ix] * np.sqrt(1 - truth.alpha ** 2)
    y[:, iy] = np.outer(z, truth.beta) + y[:, iy] * np.sqrt(1 - truth.beta ** 2)
    return RawMatrix(x), RawMatrix(y)


def full_covariance(truth: PlantedTruth, config: SimConfig) -> np.ndarray:
    """Dense (p+q) x (p+q) population covariance. Small instances only."""
    loading = np.zeros(config.p + config.q)
    loading[list(truth.i_x)] = truth.alpha
    loading[[config.p + j for j in truth.i_y]] = truth.beta
    sigma = np.outer(loading, loading)
    np.fill_diagonal(sigma, 1.0)
    return sigma
