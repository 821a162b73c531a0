"""Brute-force reference computations for small instances.

Everything here is written independently of the fast paths it checks:
double loops instead of vectorized sums, exhaustive enumeration instead of
the greedy sweep, fresh recomputation instead of incremental updates.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InstanceTooLarge

MAX_SIDE = 12
_TIE = 1e-12


@dataclass(frozen=True)
class OracleResult:
    best_u: Tuple[int, ...]
    best_v: Tuple[int, ...]
    best_score: float
    enumerated: int


def _subset_indicators(k: int) -> np.ndarray:
    # row m is the indicator of the subset encoded by bits of m + 1
    m = np.arange(1, 2 ** k)[:, None]
    return ((m >> np.arange(k)) & 1).astype(float)


def exhaustive_best_biclique(r_trunc: np.ndarray, lam: float) -> OracleResult:
    """Maximize ``sum(block) / area**lam`` over every nonempty row/column subset pair.

    Ties go to the smaller area, then to the lexicographically smaller
    ``(u, v)``.
    """
    r = np.asarray(getattr(r_trunc, "r_trunc", r_trunc), dtype=float)
    p, q = r.shape
    if p > MAX_SIDE or q > MAX_SIDE:
        raise InstanceTooLarge(f"exhaustive search limited to {MAX_SIDE}x{MAX_SIDE}, got {p}x{q}")
    U, V = _subset_indicators(p), _subset_indicators(q)
    sums = (U @ r) @ V.T
    area = np.outer(U.sum(1), V.sum(1))
    scores = sums / area ** lam
    best = scores.max()
    cand = np.argwhere(scores >= best - _TIE)
    def key(mn):
        m, n = mn
        u = tuple(np.flatnonzero(U[m]).tolist())
        v = tuple(np.flatnonzero(V[n]).tolist())
        return (area[m, n], u, v)
    m, n = min(map(tuple, cand), key=key)
    _, u, v = key((m, n))
    return OracleResult(u, v, float(scores[m, n]), (2 ** p - 1) * (2 ** q - 1))


def naive_objective(r_trunc, u, v, lam) -> float:
    total = 0.0
    for i in u:
        for j in v:
            total += r_trunc[i][j]
    return total / (len(u) * len(v)) ** lam


def naive_means(r_trunc, rows, cols):
    rm = [sum(r_trunc[i][j] for j in cols) / len(cols) for i in rows]
    cm = [sum(r_trunc[i][j] for i in rows) / len(rows) for j in cols]
    return rm, cm


def naive_sweep(r_trunc, rows, cols) -> List[Tuple[str, int]]:
    """Exclusion order recomputing all means from scratch at every step."""
    rows, cols = sorted(rows), sorted(cols)
    order = []
    while len(rows) > 1 and len(cols) > 1:
        rm, cm = naive_means(r_trunc, rows, cols)
        ti = min(range(len(rows)), key=lambda k: (rm[k], rows[k]))
        fj = min(range(len(cols)), key=lambda k: (cm[k], cols[k]))
        if rm[ti] > cm[fj]:
            order.append(("column", cols.pop(fj)))
        else:
            order.append(("row", rows.pop(ti)))
    return order


def naive_kl(r_trunc, subgraphs) -> float:
    """Cell-by-cell evaluation of the block-model divergence."""
    p, q = len(r_trunc), len(r_trunc[0])
    inside = set()
    for u, v in subgraphs:
        inside.update(itertools.product(u, v))
    d = [[1 if r_trunc[i][j] > 0 else 0 for j in range(q)] for i in range(p)]
    cells = [(i, j) for i in range(p) for j in range(q)]
    pi = sum(d[i][j] for i, j in cells) / len(cells)
    ins = [c for c in cells if c in inside]
    outs = [c for c in cells if c not in inside]
    pi1 = sum(d[i][j] for i, j in ins) / len(ins) if ins else 0.0
    pi0 = sum(d[i][j] for i, j in outs) / len(outs) if outs else 0.0

    def term(coef, num, den):
        return 0.0 if coef == 0 or num == 0 else coef * math.log(num / den)

    total = 0.0
    for group, rate in ((ins, pi1), (outs, pi0)):
        for i, j in group:
            total += d[i][j] * term(rate, rate, pi) + (1 - d[i][j]) * term(1 - rate, 1 - rate, 1 - pi)
    return total


def naive_recovery(truth_x, truth_y, est_x, est_y, p, q):
    tp = fn = tn = fp = 0
    for universe, truth, est in ((p, truth_x, est_x), (q, truth_y, est_y)):
        for k in range(universe):
            t, e = k in truth, k in est
            tp += t and e
            fn += t and not e
            tn += (not t) and (not e)
            fp += (not t) and e
    sens = tp / (tp + fn) if tp + fn else 1.0
    spec = tn / (tn + fp) if tn + fp else 1.0
    return sens, spec


def naive_eq5(x: np.ndarray, y: np.ndarray, i_x: Sequence[int], i_y: Sequence[int]) -> float:
    """Canonical correlation from a full dense SVD and explicit quadratic forms.

    ``x`` and ``y`` must already be column standardized.
    """
    if len(i_x) > 50 or len(i_y) > 50:
        raise InstanceTooLarge("naive_eq5 is limited to 50 variables per side")
    x0 = np.asarray(x)[:, list(i_x)]
    y0 = np.asarray(y)[:, list(i_y)]
    m = np.einsum("si,sj->ij", x0, y0)
    u, s, vt = np.linalg.svd(m, full_matrices=True)
    a, b = u[:, 0], vt[0, :]
    num = float(np.einsum("i,ij,j->", a, m, b))
    da = float(np.einsum("i,si,sj,j->", a, x0, x0, a))
    db = float(np.einsum("i,si,sj,j->", b, y0, y0, b))
    return abs(num) / math.sqrt(da * db)


def planted_instance(rng: np.random.Generator, p: int = 8, q: int = 8, epsilon: float = 0.1,
                     block_range=(0.6, 0.9), noise_max: float = 0.2, noise_density: float = 0.3):
    """Random truncated graph with one planted block in the separated regime.

    Block entries lie in ``block_range`` and off-block entries are either 0 or
    in ``(epsilon, noise_max]``, so the block minimum is at least
    ``block_range[0] / noise_max`` times the off-block maximum.
    """
    nu = int(rng.integers(2, max(3, p // 2 + 1)))
    nv = int(rng.integers(2, max(3, q // 2 + 1)))
    u = np.sort(rng.choice(p, nu, replace=False))
    v = np.sort(rng.choice(q, nv, replace=False))
    r = np.where(rng.random((p, q)) < noise_density,
                 rng.uniform(epsilon, noise_max, (p, q)), 0.0)
    r[r <= epsilon] = 0.0
    r[np.ix_(u, v)] = rng.uniform(*block_range, (nu, nv))
    return r, tuple(u.tolist()), tuple(v.tolist())


def figure2_instance() -> Tuple[np.ndarray, Tuple[int, ...], Tuple[int, ...]]:
    """5 x 4 truncated graph with a 2 x 2 block on rows {0, 1} x columns {0, 1}."""
    r = np.zeros((5, 4))
    r[:2, :2] = [[0.8, 0.7], [0.75, 0.9]]
    return r, (0, 1), (0, 1)


def agreement_check(n_instances: int = 100, lam: float = 0.75, seed: int = 0):
    """Fraction of separated-regime instances where greedy equals exhaustive search."""
    from .data import truncate
    from .extraction import extract_one

    rng = np.random.default_rng(seed)
    agree = 0
    for _ in range(n_instances):
        r, _, _ = planted_instance(rng)
        g = truncate(r, 0.1)
        b, _ = extract_one(g, range(8), range(8), lam)
        o = exhaustive_best_biclique(g.r_trunc, lam)
        agree += (b.u, b.v) == (o.best_u, o.best_v)
    r, u, v = figure2_instance()
    g = truncate(r, 0.2)
    b, traj = extract_one(g, range(5), range(4), 0.5)
    figure2_ok = (b.u, b.v) == (u, v) and traj.argmax_time == 5
    return agree, n_instances, figure2_ok
