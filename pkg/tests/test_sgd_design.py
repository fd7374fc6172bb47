import numpy as np
import pytest

from dppdesign.kernel_spectral import (CandidateSet, KernelSpec,
                                       build_kernel_matrix)
from dppdesign.dpp_sampler import dpp_log_pmf
from dppdesign.sgd_design import (SgdConfig, coefficient_squared_errors,
                                  designed_batches, feature_map,
                                  feature_matrix, friedman_generate,
                                  mse_ratio_experiment, sgd_fit)


# ---------------------------------------------------------------- features

def test_feature_map_at_origin():
    f = feature_map(np.zeros(5))
    assert f.tolist() == [1.0, 0.0, 0.25, 0.25, 0.0, 0.0]


def test_feature_map_known_point():
    x = np.array([0.25, 1.0, 0.5, 0.5, 1.0])
    f = feature_map(x)
    assert f == pytest.approx([1.0, 1.0, 0.0, 0.0, 0.5, 1.0])


def test_feature_matrix_stacks_rows():
    rng = np.random.default_rng(0)
    X = rng.random((7, 5))
    F = feature_matrix(X)
    assert F.shape == (7, 6)
    for i in range(7):
        assert np.array_equal(F[i], feature_map(X[i]))


# -------------------------------------------------------------------- data

def test_generate_shapes_and_ranges():
    ds = friedman_generate(23, np.random.default_rng(1))
    assert ds.X.shape == (50 * 23, 5)
    assert ds.y.shape == (50 * 23,)
    assert ds.beta_true.shape == (6,)
    assert np.all((ds.X >= 0) & (ds.X <= 1))
    assert np.all(np.abs(ds.beta_true) <= 10)


def test_generate_is_seed_deterministic():
    a = friedman_generate(10, np.random.default_rng(2))
    b = friedman_generate(10, np.random.default_rng(2))
    assert np.array_equal(a.X, b.X)
    assert np.array_equal(a.y, b.y)
    assert np.array_equal(a.beta_true, b.beta_true)


def test_generate_noise_level():
    ds = friedman_generate(100, np.random.default_rng(3))
    clean = feature_matrix(ds.X) @ ds.beta_true
    resid = ds.y - clean
    assert abs(resid.std() - 1.0) < 0.05
    assert abs(resid.mean()) < 0.05


# --------------------------------------------------------------------- SGD

def test_single_step_matches_hand_gradient():
    X = np.array([[0.2, 0.4, 0.6, 0.8, 0.5]])
    ds = friedman_generate(1, np.random.default_rng(4))
    f = feature_map(X[0])
    from dppdesign.sgd_design import FriedmanDataset
    ds = FriedmanDataset(X=X, y=np.array([2.0]), beta_true=np.zeros(6))
    cfg = SgdConfig(batchsize=1, epochs=1, lr0=0.1, tau=1e12)
    beta = sgd_fit(ds, [np.array([0])], cfg, np.random.default_rng(5))
    # beta starts at zero: one step is -lr * 2 f (f.beta - y) = lr*2*y*f
    assert beta == pytest.approx(0.1 * 2.0 * 2.0 * f)


def test_partition_validation():
    ds = friedman_generate(2, np.random.default_rng(6))
    cfg = SgdConfig(batchsize=2, epochs=1)
    bad = [np.arange(2)]  # misses most rows
    with pytest.raises(ValueError, match="partition"):
        sgd_fit(ds, bad, cfg, np.random.default_rng(0))
    overlap = [np.arange(50), np.arange(50, 100), np.arange(50)]
    with pytest.raises(ValueError, match="partition"):
        sgd_fit(ds, overlap, cfg, np.random.default_rng(0))


def test_sgd_is_deterministic_given_rng():
    ds = friedman_generate(5, np.random.default_rng(7))
    batches = list(np.arange(250).reshape(-1, 5))
    cfg = SgdConfig(batchsize=5, epochs=3)
    a = sgd_fit(ds, batches, cfg, np.random.default_rng(8))
    b = sgd_fit(ds, batches, cfg, np.random.default_rng(8))
    assert np.array_equal(a, b)


def test_full_batch_constant_rate_converges_to_least_squares():
    ds = friedman_generate(4, np.random.default_rng(9))
    F = feature_matrix(ds.X)
    target, *_ = np.linalg.lstsq(F, ds.y, rcond=None)
    # slowest curvature direction is around 1e-2, so convergence needs a
    # rate near the stability bound and plenty of sweeps
    cfg = SgdConfig(batchsize=200, epochs=20_000, lr0=0.25, tau=1e12)
    beta = sgd_fit(ds, [np.arange(200)], cfg, np.random.default_rng(10))
    assert beta == pytest.approx(target, abs=1e-6)


def test_config_validation():
    with pytest.raises(ValueError):
        SgdConfig(batchsize=0)
    with pytest.raises(ValueError):
        SgdConfig(batchsize=5, lr0=-0.1)
    with pytest.raises(ValueError):
        SgdConfig(batchsize=5, batch_mode="stratified")


# ------------------------------------------------------------ batch carving

def test_designed_batches_partition_rows():
    rng = np.random.default_rng(11)
    X = rng.random((60, 5))
    batches = designed_batches(X, 12)
    assert len(batches) == 5
    flat = np.sort(np.concatenate(batches))
    assert np.array_equal(flat, np.arange(60))
    for b in batches:
        assert b.size == 12
        assert np.array_equal(b, np.sort(b))


def test_designed_batches_requires_divisibility():
    X = np.random.default_rng(12).random((50, 5))
    with pytest.raises(ValueError):
        designed_batches(X, 7)


def test_designed_batches_beat_random_partitions_on_log_det():
    rng = np.random.default_rng(13)
    X = rng.random((40, 5))
    K = build_kernel_matrix(CandidateSet(X), KernelSpec("gaussian_iso", 0.01))
    designed = designed_batches(X, 10)
    ld_des = np.mean([dpp_log_pmf(K, b) for b in designed])
    ld_rand = []
    for _ in range(20):
        perm = rng.permutation(40).reshape(-1, 10)
        ld_rand.append(np.mean([dpp_log_pmf(K, np.sort(b)) for b in perm]))
    assert ld_des > max(ld_rand)


# ------------------------------------------------------------------- ratios

def test_identical_arms_give_unit_ratio():
    ds = friedman_generate(4, np.random.default_rng(14))
    batches = list(np.arange(200).reshape(-1, 4))
    cfg = SgdConfig(batchsize=4, epochs=2)
    a = coefficient_squared_errors(ds, batches, cfg, np.random.default_rng(15))
    b = coefficient_squared_errors(ds, batches, cfg, np.random.default_rng(15))
    assert np.allclose(a / b, 1.0)
    assert a.shape == (5,)


def test_ratio_experiment_shape_and_determinism():
    cfg = SgdConfig(batchsize=4, epochs=2, replicates=2)
    r1 = mse_ratio_experiment(cfg, batchsizes=(4, 6), seed=42)
    r2 = mse_ratio_experiment(cfg, batchsizes=(4, 6), seed=42)
    assert r1.shape == (2, 5)
    assert np.array_equal(r1, r2)
    assert np.all(r1 > 0)
