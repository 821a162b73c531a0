"""Data ingestion, column standardization and the thresholded cross-correlation graph."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import (ConstantColumn, DataError, EpsilonOutOfRange, NonFinite,
                     RowCountMismatch, TooFewRows)

MIN_ROWS = 4
QUANT_SCALE = float(2 ** 32)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RawMatrix:
    """Subjects x variables data matrix as read from disk.

    Validation runs at construction: at least ``MIN_ROWS`` rows and no NaN/Inf.
    """

    values: np.ndarray
    column_names: tuple = ()

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise DataError(f"expected a 2-d matrix, got shape {values.shape}")
        if values.shape[0] < MIN_ROWS:
            raise TooFewRows(f"need at least {MIN_ROWS} subjects, got {values.shape[0]}")
        if not np.isfinite(values).all():
            bad = np.argwhere(~np.isfinite(values))[0]
            raise NonFinite(f"non-finite value at row {bad[0]}, column {bad[1]}")
        names = tuple(str(c) for c in self.column_names)
        if not names:
            names = tuple(f"v{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise DataError(f"{len(names)} column names for {values.shape[1]} columns")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class StandardizedMatrix:
    """Columns centered to mean zero and scaled to unit Euclidean norm."""

    values: np.ndarray
    source: Optional[RawMatrix] = field(default=None, repr=False, compare=False)

    @property
    def column_names(self) -> tuple:
        if self.source is not None:
            return self.source.column_names
        return tuple(f"v{j}" for j in range(self.values.shape[1]))

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class CorrelationGraph:
    """Cross-correlation matrix ``r`` and its epsilon-truncated absolute value.

    ``r_trunc[i, j]`` equals ``|r[i, j]|`` when ``|r[i, j]| > epsilon`` and 0
    otherwise; its support is the bipartite adjacency between X and Y variables.
    """

    r: np.ndarray
    r_trunc: np.ndarray
    epsilon: float

    @property
    def shape(self) -> tuple:
        return self.r_trunc.shape

    @property
    def adjacency(self) -> np.ndarray:
        return self.r_trunc > 0

    @cached_property
    def n_edges(self) -> int:
        return int(np.count_nonzero(self.r_trunc))

    @cached_property
    def r_quant(self) -> np.ndarray:
        """``r_trunc`` in int64 fixed point (``QUANT_SCALE`` units).

        Integer sums are exact and order independent, so the greedy sweep's
        comparisons and ties do not depend on summation order.
        """
        q = np.rint(self.r_trunc * QUANT_SCALE).astype(np.int64)
        q.setflags(write=False)
        return q


def standardize(raw: RawMatrix) -> StandardizedMatrix:
    """Center each column and scale it to unit Euclidean norm.

    With this scaling ``x.T @ y`` is directly the matrix of Pearson
    correlations.

    Raises
    ------
    ConstantColumn
        If a column has zero variance.
    """
    v = raw.values
    centered = v - v.mean(axis=0)
    norms = np.linalg.norm(centered, axis=0)
    flat = (np.ptp(v, axis=0) == 0) | (norms <= 1e-12 * np.abs(v).max(axis=0))
    if flat.any():
        raise ConstantColumn(raw.column_names[np.flatnonzero(flat)[0]])
    return StandardizedMatrix(_frozen(centered / norms), source=raw)


def cross_correlation(x: StandardizedMatrix, y: StandardizedMatrix) -> np.ndarray:
    """p x q Pearson correlation matrix ``x.T @ y``."""
    if x.n != y.n:
        raise RowCountMismatch(f"X has {x.n} rows but Y has {y.n}")
    r = x.values.T @ y.values
    # rounding can push perfectly correlated pairs a few ulps past 1
    np.clip(r, -1.0, 1.0, out=r)
    return r


def truncate(r: np.ndarray, epsilon: float) -> CorrelationGraph:
    """Zero every entry with ``|r| <= epsilon`` and take absolute values."""
    if not 0.0 < epsilon < 1.0:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, 1), got {epsilon}")
    r = np.asarray(r, dtype=float)
    a = np.abs(r)
    a[a <= epsilon] = 0.0
    r = r.copy()
    r.setflags(write=False)
    a.setflags(write=False)
    return CorrelationGraph(r=r, r_trunc=a, epsilon=float(epsilon))


def correlation_graph(x: RawMatrix, y: RawMatrix, epsilon: float):
    """Standardize both blocks and build the truncated graph in one go."""
    if x.n != y.n:
        raise RowCountMismatch(f"X has {x.n} rows but Y has {y.n}")
    xs, ys = standardize(x), standardize(y)
    return xs, ys, truncate(cross_correlation(xs, ys), epsilon)


# --- persistence -------------------------------------------------------------

def read_csv(path) -> RawMatrix:
    """Read a header-plus-rows CSV (one row per subject) into a RawMatrix."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: empty file")
    header, body = rows[0], [r for r in rows[1:] if r]
    try:
        values = np.array([[float(v) for v in row] for row in body], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if values.size and values.shape[1] != len(header):
        raise DataError(f"{path}: header has {len(header)} fields, rows have {values.shape[1]}")
    try:
        return RawMatrix(values.reshape(len(body), len(header)), tuple(header))
    except DataError as exc:
        raise type(exc)(f"{path}: {exc}") from exc


def write_csv(path, raw: RawMatrix) -> None:
    # %.17g round-trips every float64 exactly
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(raw.column_names)
        for row in raw.values:
            w.writerow(["%.17g" % v for v in row])


def save_matrix(path, raw: RawMatrix) -> None:
    """Binary cache (``.npz``); :func:`load_matrix` restores it bit for bit."""
    np.savez(path, values=raw.values, column_names=np.array(raw.column_names, dtype=str))


def load_matrix(path) -> RawMatrix:
    with np.load(path, allow_pickle=False) as z:
        return RawMatrix(z["values"], tuple(z["column_names"].tolist()))


def as_raw(values, names: Sequence[str] = ()) -> RawMatrix:
    return values if isinstance(values, RawMatrix) else RawMatrix(values, tuple(names))
