"""Choice of the size exponent ``lam`` by a two-rate Bernoulli block model.

Each cell carries the indicator ``D = 1{|r| > epsilon}``. A candidate
family of bicliques splits the cells into inside and outside; the score of a
candidate compares the inside/outside edge rates ``pi1``/``pi0`` with the
overall rate ``pi``. The per-cell weighting ``D * pi1 * log(pi1 / pi)`` (and its
complement) is kept exactly as published, even though it differs from the
textbook Bernoulli KL, so results can be compared with published tables.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .data import CorrelationGraph
from .errors import DegenerateReference, NoValidCandidate
from .extraction import BicliqueSet, Sweep, extract_all

DEFAULT_LAMBDAS = tuple(round(0.5 + 0.05 * k, 2) for k in range(9))


@dataclass(frozen=True, eq=False)
class KlScore:
    lam: float
    pi0: float
    pi1: float
    pi: float
    divergence: float
    biclique_set: BicliqueSet
    n_inside: int
    n_outside: int

    def row(self) -> dict:
        bs = self.biclique_set
        return {"lambda": self.lam, "pi0": self.pi0, "pi1": self.pi1, "pi": self.pi,
                "divergence": self.divergence, "n_subgraphs": len(bs.subgraphs),
                "n_i_x": len(bs.i_x), "n_i_y": len(bs.i_y)}


def _xlogy_ratio(coef: float, num: float, den: float) -> float:
    # coef * log(num / den) with 0 * log(0 / x) = 0
    if coef == 0.0 or num == 0.0:
        return 0.0
    return coef * math.log(num / den)


def _region_term(n_ones: int, n_cells: int, rate: float, pi: float) -> float:
    if n_cells == 0:
        return 0.0
    return (n_ones * _xlogy_ratio(rate, rate, pi)
            + (n_cells - n_ones) * _xlogy_ratio(1.0 - rate, 1.0 - rate, 1.0 - pi))


def kl_divergence(graph: CorrelationGraph, bset: BicliqueSet) -> KlScore:
    """Score a biclique family against the single-rate reference.

    Raises
    ------
    DegenerateReference
        When the overall edge rate is 0 or 1.
    """
    p, q = graph.shape
    total = p * q
    ones = graph.n_edges
    pi = ones / total
    if ones == 0 or ones == total:
        raise DegenerateReference(f"overall edge rate is {pi}; divergence undefined")
    # bicliques are disjoint in rows and columns, so their cell blocks do not overlap
    n_in = sum(len(b.u) * len(b.v) for b in bset.subgraphs)
    k_in = sum(int(np.count_nonzero(graph.r_trunc[np.ix_(b.u, b.v)])) for b in bset.subgraphs)
    n_out, k_out = total - n_in, ones - k_in
    pi1 = k_in / n_in if n_in else 0.0
    pi0 = k_out / n_out if n_out else 0.0
    div = _region_term(k_in, n_in, pi1, pi) + _region_term(k_out, n_out, pi0, pi)
    return KlScore(bset.lam, pi0, pi1, pi, div, bset, n_in, n_out)


def select_lambda(graph: CorrelationGraph, lambdas: Sequence[float] = DEFAULT_LAMBDAS,
                  max_subgraphs: int = 5, min_block_mean: Optional[float] = None
                  ) -> Tuple[float, KlScore, List[KlScore]]:
    """Pick the ``lam`` whose extraction maximizes the divergence.

    Ties go to the larger ``lam``. Candidates with a degenerate reference,
    and candidates that extracted no biclique at all, are skipped.
    """
    lambdas = [float(l) for l in lambdas]
    if not lambdas:
        raise ValueError("empty lambda grid")
    cache: Dict[tuple, Sweep] = {}
    scores: List[KlScore] = []
    for lam in lambdas:
        bset = extract_all(graph, lam, max_subgraphs, min_block_mean, cache=cache)
        if not bset.subgraphs:
            continue
        try:
            scores.append(kl_divergence(graph, bset))
        except DegenerateReference:
            continue
    if not scores:
        raise NoValidCandidate("no lambda candidate produced a finite divergence")
    best = max(scores, key=lambda s: (s.divergence, s.lam))
    return best.lam, best, scores


def scores_to_csv(scores: Sequence[KlScore]) -> str:
    buf = io.StringIO()
    fields = ["lambda", "pi0", "pi1", "pi", "divergence", "n_subgraphs", "n_i_x", "n_i_y"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for s in scores:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in s.row().items()})
    return buf.getvalue()
