"""Greedy row/column exclusion for biclique extraction.

One sweep over an active matrix repeatedly drops the row or column with the
smallest mean of truncated absolute correlations until a single row or a
single column is left. The order of exclusions does not depend on the
exponent ``lam``; only the choice of which visited state becomes the biclique
does. :class:`Sweep` therefore stores the exclusion order once and can be
re-scored for any ``lam``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .data import CorrelationGraph
from .errors import EmptyIndexSet

ROW, COL = 0, 1
_KIND_NAMES = ("row", "column")
# larger than any attainable fixed-point row/column sum
_DEAD = np.int64(2 ** 62)
_CHUNK = 1024


def _index_array(idx, bound: int, what: str) -> np.ndarray:
    a = np.unique(np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64))
    if a.size == 0:
        raise EmptyIndexSet(f"{what} index set is empty")
    if a[0] < 0 or a[-1] >= bound:
        raise IndexError(f"{what} index out of range [0, {bound})")
    return a


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.5 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0.5, 1], got {lam}")
    return lam


def objective(graph: CorrelationGraph, u, v, lam: float) -> float:
    """Block sum of ``r_trunc`` over ``u x v`` divided by ``(|u| |v|) ** lam``."""
    u = _index_array(u, graph.shape[0], "row")
    v = _index_array(v, graph.shape[1], "column")
    block = graph.r_trunc[np.ix_(u, v)]
    return float(block.sum() / (u.size * v.size) ** float(lam))


def total_objective(graph: CorrelationGraph, subgraphs, lam: float) -> float:
    """Objective of a family of disjoint subgraphs: sum of the per-block terms."""
    return sum(objective(graph, b.u, b.v, lam) for b in subgraphs)


def row_col_means(graph: CorrelationGraph, active_rows, active_cols):
    """Row and column means of the active submatrix of ``r_trunc``."""
    rows = _index_array(active_rows, graph.shape[0], "row")
    cols = _index_array(active_cols, graph.shape[1], "column")
    sub = graph.r_trunc[np.ix_(rows, cols)]
    return sub.mean(axis=1), sub.mean(axis=0)


@dataclass(frozen=True)
class Biclique:
    u: Tuple[int, ...]
    v: Tuple[int, ...]
    score: float
    lam: float
    block_mean: float

    @property
    def size(self) -> Tuple[int, int]:
        return len(self.u), len(self.v)

    def to_dict(self, row_names=None, col_names=None) -> dict:
        d = {"u": list(self.u), "v": list(self.v), "score": self.score,
             "block_mean": self.block_mean}
        if row_names is not None:
            d["u_names"] = [row_names[i] for i in self.u]
        if col_names is not None:
            d["v_names"] = [col_names[j] for j in self.v]
        return d


@dataclass(frozen=True, eq=False)
class ExclusionTrajectory:
    """Exclusion order of one sweep plus the objective of every visited state.

    State ``t`` is the active set after ``t`` exclusions; state 0 is the
    starting active set, so ``objectives`` has ``len(excluded) + 1`` entries.
    """

    rows: np.ndarray
    cols: np.ndarray
    kinds: np.ndarray
    excluded: np.ndarray
    objectives: np.ndarray
    argmax_time: int
    lam: float

    @property
    def steps(self) -> List[tuple]:
        """``(t, kind, excluded index, objective after the step)``, t from 1."""
        return [(t + 1, _KIND_NAMES[k], int(e), float(o))
                for t, (k, e, o) in enumerate(zip(self.kinds, self.excluded, self.objectives[1:]))]

    def state(self, t: int) -> Tuple[np.ndarray, np.ndarray]:
        kinds, exc = self.kinds[:t], self.excluded[:t]
        u = np.setdiff1d(self.rows, exc[kinds == ROW], assume_unique=True)
        v = np.setdiff1d(self.cols, exc[kinds == COL], assume_unique=True)
        return u, v


@dataclass(eq=False)
class Sweep:
    """Lambda-free record of one exclusion sweep.

    ``sums_q`` holds exact fixed-point block sums per state (used for every
    decision), ``sums_f`` the float block sums (used for reported objectives).
    """

    rows: np.ndarray
    cols: np.ndarray
    kinds: np.ndarray
    excluded: np.ndarray
    n_rows: np.ndarray
    n_cols: np.ndarray
    sums_q: np.ndarray
    sums_f: np.ndarray

    @classmethod
    def run(cls, graph: CorrelationGraph, active_rows, active_cols) -> "Sweep":
        rows = _index_array(active_rows, graph.shape[0], "row")
        cols = _index_array(active_cols, graph.shape[1], "column")
        Q, F = graph.r_quant, graph.r_trunc
        full = rows.size == Q.shape[0] and cols.size == Q.shape[1]

        # initial row/column sums, chunked so no full submatrix copy is made
        rs = np.zeros(rows.size, dtype=np.int64)
        cs = np.zeros(cols.size, dtype=np.int64)
        total_f = 0.0
        for start in range(0, rows.size, _CHUNK):
            r_idx = rows[start:start + _CHUNK]
            q = Q[r_idx] if full else Q[np.ix_(r_idx, cols)]
            f = F[r_idx] if full else F[np.ix_(r_idx, cols)]
            rs[start:start + r_idx.size] = q.sum(axis=1)
            cs += q.sum(axis=0)
            total_f += float(f.sum())
        total_q = int(rs.sum())

        nr, nc = rows.size, cols.size
        row_alive = np.ones(nr, dtype=bool)
        col_alive = np.ones(nc, dtype=bool)
        max_steps = nr + nc - 1
        kinds = np.empty(max_steps, dtype=np.int8)
        excluded = np.empty(max_steps, dtype=np.int64)
        n_rows = np.empty(max_steps + 1, dtype=np.int64)
        n_cols = np.empty(max_steps + 1, dtype=np.int64)
        sums_q = np.empty(max_steps + 1, dtype=np.int64)
        sums_f = np.empty(max_steps + 1, dtype=float)
        n_rows[0], n_cols[0], sums_q[0], sums_f[0] = nr, nc, total_q, total_f

        t = 0
        while nr > 1 and nc > 1:
            # argmin returns the first minimum, i.e. the smallest original index
            ti = int(np.argmin(rs))
            fj = int(np.argmin(cs))
            r_min, c_min = int(rs[ti]), int(cs[fj])
            # r_min / nc > c_min / nr, compared exactly
            if r_min * nr > c_min * nc:
                j = cols[fj]
                live_rows = rows[row_alive]
                rs -= Q[rows, j]
                total_q -= c_min
                total_f -= float(F[live_rows, j].sum())
                cs[fj] = _DEAD
                col_alive[fj] = False
                nc -= 1
                kinds[t], excluded[t] = COL, j
            else:
                i = rows[ti]
                live_cols = cols[col_alive]
                cs -= Q[i, cols]
                total_q -= r_min
                total_f -= float(F[i, live_cols].sum())
                rs[ti] = _DEAD
                row_alive[ti] = False
                nr -= 1
                kinds[t], excluded[t] = ROW, i
            t += 1
            n_rows[t], n_cols[t], sums_q[t], sums_f[t] = nr, nc, total_q, total_f

        return cls(rows, cols, kinds[:t].copy(), excluded[:t].copy(), n_rows[:t + 1].copy(),
                   n_cols[:t + 1].copy(), sums_q[:t + 1].copy(), sums_f[:t + 1].copy())

    @property
    def n_steps(self) -> int:
        return self.kinds.size

    def best_time(self, lam: float) -> int:
        """Index of the state maximizing the objective; ties go to the latest state."""
        area = (self.n_rows * self.n_cols).astype(float) ** lam
        keys = self.sums_q.astype(float) / area
        rev = keys[::-1]
        return int(keys.size - 1 - np.argmax(rev))

    def trajectory(self, lam: float) -> ExclusionTrajectory:
        lam = _check_lambda(lam)
        area = (self.n_rows * self.n_cols).astype(float) ** lam
        return ExclusionTrajectory(self.rows, self.cols, self.kinds, self.excluded,
                                   self.sums_f / area, self.best_time(lam), lam)


def _make_biclique(graph, u, v, lam) -> Biclique:
    block = graph.r_trunc[np.ix_(u, v)]
    s = float(block.sum())
    return Biclique(tuple(int(i) for i in u), tuple(int(j) for j in v),
                    s / (u.size * v.size) ** lam, lam, s / block.size)


def extract_one(graph: CorrelationGraph, active_rows, active_cols, lam: float,
                sweep: Optional[Sweep] = None) -> Tuple[Biclique, ExclusionTrajectory]:
    """Run one exclusion sweep and return the best visited state as a biclique.

    At every step the active row with the smallest mean and the active column
    with the smallest mean are compared; the column is dropped when the row
    mean is strictly larger, otherwise the row is dropped.
    """
    lam = _check_lambda(lam)
    if sweep is None:
        sweep = Sweep.run(graph, active_rows, active_cols)
    traj = sweep.trajectory(lam)
    u, v = traj.state(traj.argmax_time)
    return _make_biclique(graph, u, v, lam), traj


@dataclass(eq=False)
class BicliqueSet:
    lam: float
    subgraphs: List[Biclique]
    trajectories: List[ExclusionTrajectory] = field(repr=False)

    @property
    def i_x(self) -> Tuple[int, ...]:
        return tuple(sorted(i for b in self.subgraphs for i in b.u))

    @property
    def i_y(self) -> Tuple[int, ...]:
        return tuple(sorted(j for b in self.subgraphs for j in b.v))

    def to_dict(self, row_names=None, col_names=None) -> dict:
        return {"lambda": self.lam,
                "subgraphs": [b.to_dict(row_names, col_names) for b in self.subgraphs],
                "i_x": list(self.i_x), "i_y": list(self.i_y)}


def extract_all(graph: CorrelationGraph, lam: float, max_subgraphs: int = 5,
                min_block_mean: Optional[float] = None,
                cache: Optional[Dict[tuple, Sweep]] = None) -> BicliqueSet:
    """Extract up to ``max_subgraphs`` disjoint bicliques.

    Each extraction starts from the rows and columns not claimed by earlier
    bicliques. A candidate whose mean ``r_trunc`` is at or below
    ``min_block_mean`` (default: the graph's epsilon) is discarded and ends the
    search. ``cache`` maps active sets to sweeps so several ``lam`` values can
    share the lambda-independent work.
    """
    lam = _check_lambda(lam)
    if max_subgraphs < 1:
        raise ValueError("max_subgraphs must be >= 1")
    floor = graph.epsilon if min_block_mean is None else float(min_block_mean)
    if not 0.0 <= floor < 1.0:
        raise ValueError(f"min_block_mean must lie in [0, 1), got {floor}")

    p, q = graph.shape
    rows_left = np.ones(p, dtype=bool)
    cols_left = np.ones(q, dtype=bool)
    subgraphs, trajectories = [], []
    while len(subgraphs) < max_subgraphs and rows_left.any() and cols_left.any():
        rows, cols = np.flatnonzero(rows_left), np.flatnonzero(cols_left)
        key = (rows.tobytes(), cols.tobytes())
        sweep = cache.get(key) if cache is not None else None
        if sweep is None:
            sweep = Sweep.run(graph, rows, cols)
            if cache is not None:
                cache[key] = sweep
        b, traj = extract_one(graph, rows, cols, lam, sweep=sweep)
        if b.block_mean <= floor:
            break
        subgraphs.append(b)
        trajectories.append(traj)
        rows_left[list(b.u)] = False
        cols_left[list(b.v)] = False
    return BicliqueSet(lam, subgraphs, trajectories)
