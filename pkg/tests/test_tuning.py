import csv
import io

import numpy as np
import pytest

from gcca.data import truncate
from gcca.errors import DegenerateReference, NoValidCandidate
from gcca.extraction import Biclique, BicliqueSet, extract_all
from gcca.oracle import naive_kl
from gcca.tuning import DEFAULT_LAMBDAS, kl_divergence, scores_to_csv, select_lambda

from conftest import random_graph


def _bset(graph, blocks, lam=0.75):
    subs = []
    for u, v in blocks:
        block = graph.r_trunc[np.ix_(u, v)]
        subs.append(Biclique(tuple(u), tuple(v), 0.0, lam, float(block.mean())))
    return BicliqueSet(lam, subs, [])


def test_default_grid():
    assert DEFAULT_LAMBDAS == (0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9)


def test_indistinguishable_blocks_give_zero():
    r = np.fromfunction(lambda i, j: ((i + j) % 2 == 0) * 0.5, (4, 4))
    g = truncate(r, 0.2)
    s = kl_divergence(g, _bset(g, [((0, 1), (0, 1))]))
    assert s.pi == s.pi0 == s.pi1 == 0.5
    assert s.divergence == 0.0


def test_degenerate_reference():
    with pytest.raises(DegenerateReference):
        kl_divergence(truncate(np.zeros((3, 3)), 0.2),
                      _bset(truncate(np.zeros((3, 3)), 0.2), [((0,), (0,))]))
    g = truncate(np.full((3, 3), 0.9), 0.2)
    with pytest.raises(DegenerateReference):
        kl_divergence(g, _bset(g, [((0,), (0,))]))


def test_perfect_block_matches_naive():
    r = np.zeros((6, 7))
    r[np.ix_([1, 2, 4], [0, 3])] = 0.8
    g = truncate(r, 0.2)
    s = kl_divergence(g, _bset(g, [((1, 2, 4), (0, 3))]))
    assert (s.pi1, s.pi0, s.pi) == (1.0, 0.0, 6 / 42)
    assert s.n_inside + s.n_outside == 42
    assert abs(s.divergence - naive_kl(g.r_trunc, [((1, 2, 4), (0, 3))])) < 1e-12


def test_kl_matches_naive_on_random_instances():
    rng = np.random.default_rng(8)
    checked = 0
    for _ in range(220):
        p, q = int(rng.integers(3, 12)), int(rng.integers(3, 12))
        g = random_graph(rng, p, q, epsilon=float(rng.uniform(0.05, 0.5)))
        if g.n_edges in (0, p * q):
            continue
        bset = extract_all(g, float(rng.uniform(0.5, 1.0)), int(rng.integers(1, 4)), 0.0)
        s = kl_divergence(g, bset)
        blocks = [(b.u, b.v) for b in bset.subgraphs]
        assert abs(s.divergence - naive_kl(g.r_trunc, blocks)) < 1e-12
        inside = np.zeros((p, q), bool)
        for u, v in blocks:
            inside[np.ix_(u, v)] = True
        d = g.r_trunc > 0
        assert abs(s.pi - d.mean()) < 1e-12
        assert abs(s.pi1 - d[inside].mean()) < 1e-12
        if (~inside).any():
            assert abs(s.pi0 - d[~inside].mean()) < 1e-12
        assert np.isfinite(s.divergence)
        checked += 1
    assert checked >= 200


def test_growing_block_with_noise_row_lowers_divergence():
    for extra in range(3, 8):
        r = np.zeros((8, 8))
        r[:3, :4] = 0.9
        g = truncate(r, 0.2)
        exact = kl_divergence(g, _bset(g, [((0, 1, 2), (0, 1, 2, 3))]))
        grown = kl_divergence(g, _bset(g, [((0, 1, 2, extra), (0, 1, 2, 3))]))
        assert exact.divergence > grown.divergence


def test_select_single_lambda():
    rng = np.random.default_rng(2)
    g = random_graph(rng, 10, 10)
    lam, best, scores = select_lambda(g, [0.65])
    assert lam == 0.65 and len(scores) == 1 and best is scores[0]


def test_ties_go_to_larger_lambda():
    r = np.zeros((6, 6))
    r[:2, :2] = 0.9
    g = truncate(r, 0.2)
    lam, best, scores = select_lambda(g, [0.5, 0.7, 0.9])
    assert len({round(s.divergence, 15) for s in scores}) == 1
    assert lam == 0.9


def test_no_valid_candidate():
    with pytest.raises(NoValidCandidate):
        select_lambda(truncate(np.zeros((4, 4)), 0.2))


def test_selection_is_permutation_symmetric():
    rng = np.random.default_rng(21)
    r = rng.uniform(-0.3, 0.3, (15, 12))
    r[np.ix_([2, 5, 9, 11], [1, 4, 7])] = rng.uniform(0.6, 0.9, (4, 3))
    g = truncate(r, 0.2)
    sig, pi = rng.permutation(15), rng.permutation(12)
    gp = truncate(r[sig][:, pi], 0.2)
    lam, best, _ = select_lambda(g)
    lam_p, best_p, _ = select_lambda(gp)
    assert lam == lam_p
    for b, bp in zip(best.biclique_set.subgraphs, best_p.biclique_set.subgraphs):
        assert tuple(sorted(sig[list(bp.u)].tolist())) == b.u
        assert tuple(sorted(pi[list(bp.v)].tolist())) == b.v


def test_scores_csv():
    rng = np.random.default_rng(2)
    _, _, scores = select_lambda(random_graph(rng, 10, 10), [0.5, 0.75])
    rows = list(csv.DictReader(io.StringIO(scores_to_csv(scores))))
    assert list(rows[0]) == ["lambda", "pi0", "pi1", "pi", "divergence", "n_subgraphs",
                             "n_i_x", "n_i_y"]
    assert [float(r["lambda"]) for r in rows] == [0.5, 0.75]
    assert float(rows[0]["divergence"]) == scores[0].divergence
