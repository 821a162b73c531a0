import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcca.synthgen import SimConfig, build_truth, full_covariance, population_blocks, sample


def closed_form_rho(alpha, beta):
    # for a rank-one cross block the leading pair is alpha/|alpha|, beta/|beta|
    na, nb = np.linalg.norm(alpha), np.linalg.norm(beta)
    qa = np.sum(alpha ** 2 * (1 - alpha ** 2)) / na ** 2 + na ** 2
    qb = np.sum(beta ** 2 * (1 - beta ** 2)) / nb ** 2 + nb ** 2
    return na * nb / np.sqrt(qa * qb)


def test_degenerate_range_is_exact():
    truth = build_truth(SimConfig(p=50, q=60, rho_lo=0.35, rho_hi=0.35, replicates=1))
    assert np.all(truth.sigma_xy_block == 0.35)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 31), st.floats(0.05, 0.9), st.floats(0.0, 0.09))
def test_block_within_range(seed, lo, width):
    cfg = SimConfig(p=40, q=50, block_rows=7, block_cols=9, rho_lo=lo, rho_hi=lo + width,
                    seed=seed, replicates=1)
    truth = build_truth(cfg)
    assert truth.sigma_xy_block.min() >= cfg.rho_lo
    assert truth.sigma_xy_block.max() <= cfg.rho_hi
    assert 0 < truth.rho_c_pop < 1
    assert len(set(truth.i_x)) == 7 and max(truth.i_x) < 40
    assert abs(truth.rho_c_pop - closed_form_rho(truth.alpha, truth.beta)) < 1e-9


@pytest.mark.parametrize("rows,cols,lo,hi", [(20, 30, 0.3, 0.4), (30, 40, 0.2, 0.3),
                                             (20, 30, 0.2, 0.3), (30, 40, 0.3, 0.4)])
def test_population_rho_for_published_settings(rows, cols, lo, hi):
    truth = build_truth(SimConfig(block_rows=rows, block_cols=cols, rho_lo=lo, rho_hi=hi,
                                  seed=2024))
    assert abs(truth.rho_c_pop - closed_form_rho(truth.alpha, truth.beta)) < 1e-12
    # an independent route: dense eigen-solve of the population blocks
    sx, sy, sxy = population_blocks(truth.alpha, truth.beta)
    w, vecs = np.linalg.eigh(sxy @ sxy.T)
    a = vecs[:, -1]
    b = sxy.T @ a / np.sqrt(w[-1])
    rho = (a @ sxy @ b) / np.sqrt((a @ sx @ a) * (b @ sy @ b))
    assert abs(truth.rho_c_pop - abs(rho)) < 1e-9


def test_covariance_is_psd_with_unit_variances():
    cfg = SimConfig(p=40, q=50, block_rows=20, block_cols=30, rho_lo=0.3, rho_hi=0.4,
                    replicates=1)
    sigma = full_covariance(build_truth(cfg), cfg)
    assert np.linalg.eigvalsh(sigma).min() >= -1e-10
    np.testing.assert_array_equal(np.diag(sigma), 1.0)


def test_large_sample_correlations():
    cfg = SimConfig(n=100_000, p=5, q=4, block_rows=2, block_cols=2, rho_lo=0.3, rho_hi=0.4,
                    seed=1, replicates=1)
    truth = build_truth(cfg)
    x, y = sample(truth, cfg, 0)
    r = np.corrcoef(x.values.T, y.values.T)[:5, 5:]
    expected = np.zeros((5, 4))
    expected[np.ix_(truth.i_x, truth.i_y)] = np.outer(truth.alpha, truth.beta)
    assert np.abs(r - expected).max() < 0.01
    np.testing.assert_allclose(x.values.std(axis=0), 1.0, atol=0.01)


def test_factor_sampler_agrees_with_dense_cholesky():
    cfg = SimConfig(n=100_000, p=4, q=3, block_rows=2, block_cols=2, rho_lo=0.4, rho_hi=0.6,
                    seed=4, replicates=1)
    truth = build_truth(cfg)
    sigma = full_covariance(truth, cfg)
    chol = np.linalg.cholesky(sigma)
    z = np.random.default_rng(99).standard_normal((cfg.n, cfg.p + cfg.q)) @ chol.T
    x, y = sample(truth, cfg, 0)
    emp_factor = np.cov(np.column_stack([x.values, y.values]).T)
    emp_dense = np.cov(z.T)
    assert np.abs(emp_factor - sigma).max() < 0.02
    assert np.abs(emp_dense - sigma).max() < 0.02


def test_sampling_is_deterministic_and_order_free():
    cfg = SimConfig(n=50, p=30, q=20, block_rows=3, block_cols=4, seed=17, replicates=5)
    truth = build_truth(cfg)
    x3, y3 = sample(truth, cfg, 3)
    for rep in range(5):
        sample(truth, cfg, rep)
    x3b, y3b = sample(build_truth(cfg), cfg, 3)
    np.testing.assert_array_equal(x3.values, x3b.values)
    np.testing.assert_array_equal(y3.values, y3b.values)
    x2, _ = sample(truth, cfg, 2)
    assert not np.array_equal(x2.values, x3.values)
    other = build_truth(cfg.with_(seed=18))
    assert other.i_x != truth.i_x or not np.array_equal(other.alpha, truth.alpha)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(rho_lo=0.5, rho_hi=0.4)
    with pytest.raises(ValueError):
        SimConfig(p=10, block_rows=11)
    with pytest.raises(ValueError):
        SimConfig(n=3)
    cfg = SimConfig(replicates=2)
    with pytest.raises(ValueError):
        sample(build_truth(cfg), cfg, 2)
