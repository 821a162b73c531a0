"""Canonical vectors and canonical correlation on the selected variables."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .data import StandardizedMatrix, as_raw, correlation_graph
from .errors import NoValidCandidate, SvdFailure, ZeroDenominator
from .extraction import _index_array
from .tuning import DEFAULT_LAMBDAS, KlScore, select_lambda

DENOM_FLOOR = 1e-14


@dataclass(frozen=True)
class GccaConfig:
    epsilon: float = 0.2
    lambdas: Tuple[float, ...] = DEFAULT_LAMBDAS
    max_subgraphs: int = 5
    # None means "use epsilon"
    min_block_mean: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(l) for l in self.lambdas))

    @property
    def block_floor(self) -> float:
        return self.epsilon if self.min_block_mean is None else self.min_block_mean

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambdas"] = list(self.lambdas)
        d["min_block_mean"] = self.block_floor
        return d


def _fix_signs(a: np.ndarray, b: np.ndarray, m: np.ndarray):
    k = int(np.argmax(np.abs(a)))
    if a[k] < 0:
        a = -a
    if a @ m @ b < 0:
        b = -b
    return a, b


def canonical_vectors(x: StandardizedMatrix, y: StandardizedMatrix, i_x, i_y):
    """Leading left/right singular vectors of ``X[:, i_x].T @ Y[:, i_y]``.

    The largest-magnitude entry of ``a`` is made positive and ``b`` is
    flipped so that ``a @ M @ b >= 0``.
    """
    i_x = _index_array(i_x, x.values.shape[1], "X")
    i_y = _index_array(i_y, y.values.shape[1], "Y")
    return leading_singular_pair(x.values[:, i_x].T @ y.values[:, i_y])


def leading_singular_pair(m: np.ndarray):
    """Sign-normalized singular vectors of the largest singular value of ``m``."""
    try:
        u, s, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdFailure(str(exc)) from exc
    if not np.all(np.isfinite(s)):
        raise SvdFailure("non-finite singular values")
    return _fix_signs(u[:, 0].copy(), vt[0].copy(), m)


def canonical_correlation(x: StandardizedMatrix, y: StandardizedMatrix, i_x, i_y,
                          a_hat, b_hat) -> float:
    """Correlation between the canonical variates ``X0 @ a`` and ``Y0 @ b``."""
    i_x = _index_array(i_x, x.values.shape[1], "X")
    i_y = _index_array(i_y, y.values.shape[1], "Y")
    a, b = np.asarray(a_hat, float), np.asarray(b_hat, float)
    if a.shape != (i_x.size,) or b.shape != (i_y.size,):
        raise ValueError("canonical vectors do not match the index sets")
    xa = x.values[:, i_x] @ a
    yb = y.values[:, i_y] @ b
    qa, qb = float(xa @ xa), float(yb @ yb)
    if qa <= DENOM_FLOOR or qb <= DENOM_FLOOR:
        raise ZeroDenominator("degenerate projection in canonical correlation")
    return float(xa @ yb) / np.sqrt(qa * qb)


def block_signs(r: np.ndarray, subgraphs) -> List[List[float]]:
    """Mean signed correlation of every cross block ``U_c x V_d``."""
    return [[float(r[np.ix_(bu.u, bv.v)].mean()) for bv in subgraphs] for bu in subgraphs]


@dataclass(eq=False)
class GccaFit:
    lambda_star: float
    i_x: Tuple[int, ...]
    i_y: Tuple[int, ...]
    a_hat: np.ndarray
    b_hat: np.ndarray
    rho_hat: float
    block_signs: List[List[float]]
    subgraphs: list
    diagnostics: List[KlScore] = field(repr=False)
    config: GccaConfig = field(default_factory=GccaConfig)
    x_names: Tuple[str, ...] = field(default=(), repr=False)
    y_names: Tuple[str, ...] = field(default=(), repr=False)
    r_sub: Optional[np.ndarray] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        xn, yn = self.x_names or None, self.y_names or None
        return {
            "lambda_star": self.lambda_star,
            "rho_hat": self.rho_hat,
            "i_x": list(self.i_x),
            "i_y": list(self.i_y),
            "i_x_names": [xn[i] for i in self.i_x] if xn else None,
            "i_y_names": [yn[j] for j in self.i_y] if yn else None,
            "a_hat": self.a_hat.tolist(),
            "b_hat": self.b_hat.tolist(),
            "block_signs": self.block_signs,
            "subgraphs": [b.to_dict(xn, yn) for b in self.subgraphs],
            "config": self.config.to_dict(),
            "lambda_scores": [s.row() for s in self.diagnostics],
        }

    def to_json(self) -> str:
        # json writes floats with repr, which round-trips exactly
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def heatmap_csv(self) -> str:
        """Long-format reordered correlation submatrix, rows/columns grouped by block."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row_name", "col_name", "r", "in_subgraph", "block_id"])
        xn = self.x_names or tuple(f"x{i}" for i in range(max(self.i_x) + 1))
        yn = self.y_names or tuple(f"y{j}" for j in range(max(self.i_y) + 1))
        row_block = {i: c for c, b in enumerate(self.subgraphs) for i in b.u}
        col_block = {j: c for c, b in enumerate(self.subgraphs) for j in b.v}
        rows = [i for b in self.subgraphs for i in b.u]
        cols = [j for b in self.subgraphs for j in b.v]
        pos_x = {i: k for k, i in enumerate(self.i_x)}
        pos_y = {j: k for k, j in enumerate(self.i_y)}
        for i in rows:
            for j in cols:
                same = row_block[i] == col_block[j]
                w.writerow([xn[i], yn[j], repr(float(self.r_sub[pos_x[i], pos_y[j]])),
                            "true" if same else "false", row_block[i] if same else ""])
        return buf.getvalue()


def fit(x, y, config: Optional[GccaConfig] = None) -> GccaFit:
    """Full pipeline: standardize, correlate, threshold, select ``lam``, estimate.

    Raises
    ------
    NoValidCandidate
        When no candidate ``lam`` yields a biclique with a usable score,
        e.g. no correlation exceeds ``epsilon``.
    """
    config = config or GccaConfig()
    x, y = as_raw(x), as_raw(y)
    xs, ys, graph = correlation_graph(x, y, config.epsilon)
    lam, best, scores = select_lambda(graph, config.lambdas, config.max_subgraphs,
                                      config.min_block_mean)
    bset = best.biclique_set
    i_x, i_y = bset.i_x, bset.i_y
    if not i_x or not i_y:
        raise NoValidCandidate("selected candidate has no biclique")
    a, b = canonical_vectors(xs, ys, i_x, i_y)
    rho = canonical_correlation(xs, ys, i_x, i_y, a, b)
    return GccaFit(lambda_star=lam, i_x=i_x, i_y=i_y, a_hat=a, b_hat=b, rho_hat=rho,
                   block_signs=block_signs(graph.r, bset.subgraphs),
                   subgraphs=list(bset.subgraphs), diagnostics=scores, config=config,
                   x_names=x.column_names, y_names=y.column_names,
                   r_sub=np.array(graph.r[np.ix_(i_x, i_y)]))
