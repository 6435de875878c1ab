import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from salmine.deboor import grid_axes
from salmine.kriging import (InvalidSitesError, KrigingModel, OptimizerSettings,
                             add_indicator_covariance, concentrated_loglik, correlation,
                             fit, model_with_params, spike_density)
from salmine.streamlines import AmbiguityDistribution

from oracles import dace_predict


def random_fit(seed, k=None, n=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(1, 4))
    k = k or int(rng.integers(2, 13))
    x = rng.uniform(-1, 1, size=(k, n))
    y = np.sin(3 * x).sum(axis=1) + rng.normal(scale=0.3, size=k)
    return x, y, fit(x, y, OptimizerSettings(seed=seed, n_starts=2))


def test_correlation_examples():
    assert correlation([1.0, 1.0], [0.3, 0.2], [0.3, 0.2]) == 1.0
    assert correlation([1.0, 1.0], [0.0, 0.0], [1.0, 0.0]) == pytest.approx(np.exp(-1))
    assert correlation([0.0, 0.0], [5.0, -2.0], [1.0, 0.0]) == 1.0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=2, max_size=2),
       st.lists(st.floats(-2, 2), min_size=2, max_size=2),
       st.lists(st.floats(-2, 2), min_size=2, max_size=2),
       st.floats(0.01, 1.0))
def test_correlation_symmetric_and_decreasing(c, a, b, grow):
    assert correlation(c, a, b) == correlation(c, b, a)
    d = np.subtract(b, a)
    farther = np.add(a, d + np.sign(d + 1e-300) * grow)
    assert correlation(c, a, farther) < correlation(c, a, b) or correlation(c, a, b) == 0.0


def test_fit_three_points_interpolates():
    m = fit([[0.0], [1.0], [2.0]], [0.0, 1.0, 0.0])
    assert np.max(np.abs(m.predict([[0.0], [1.0], [2.0]]) - [0, 1, 0])) < 1e-8


def test_constant_data_uses_variance_floor():
    m = fit([[0.0], [1.0]], [2.5, 2.5])
    assert m.beta == pytest.approx(2.5)
    assert m.sigma2 == pytest.approx(1e-12)
    assert m.predict([[0.4]]) == pytest.approx(2.5)


def test_single_site_model_is_constant():
    m = model_with_params([[0.2, 0.3]], [4.0], [1.0, 1.0])
    assert np.allclose(m.predict(np.random.default_rng(0).uniform(-1, 1, (20, 2))), 4.0)


def test_far_field_prediction_tends_to_beta():
    x, y, m = random_fit(4, k=8, n=2)
    far = m.predict([[1e3, -1e3]])
    assert far == pytest.approx(m.beta)
    # far-field variance is sigma2 plus the trend-uncertainty term
    assert m.mse([[1e3, -1e3]]) == pytest.approx(m.sigma2 * (1 + 1e-10 + 1 / m._one_ri_one))


def test_duplicate_sites_rejected():
    with pytest.raises(InvalidSitesError):
        fit([[0.0], [0.0]], [1.0, 2.0])


def test_against_dense_textbook_formulas():
    x, y, m = random_fit(7, k=9, n=2)
    q = np.random.default_rng(1).uniform(-1, 1, (50, 2))
    pred, mse, beta, sigma2 = dace_predict(x, y, m.corr_params, q)
    assert m.beta == pytest.approx(beta, rel=1e-6)
    assert m.sigma2 == pytest.approx(sigma2, rel=1e-6)
    assert np.allclose(m.predict(q), pred, atol=1e-7)
    assert np.allclose(m.mse(q), mse, atol=1e-7 * m.sigma2)


def test_exactness_and_mse_over_100_random_fits():
    worst, worst_mse = 0.0, 0.0
    for seed in range(100):
        x, y, m = random_fit(seed)
        worst = max(worst, float(np.max(np.abs(m.predict(x) - y))))
        worst_mse = max(worst_mse, float(np.max(m.mse(x))))
        q = np.random.default_rng(seed).uniform(-1.5, 1.5, (30, x.shape[1]))
        assert np.all(m.mse(q) >= 0)
    assert worst < 1e-6
    assert worst_mse < 1e-6


def test_predict_invariant_to_site_order():
    x, y, m = random_fit(12, k=7, n=2)
    perm = np.random.default_rng(0).permutation(len(y))
    m2 = model_with_params(x[perm], y[perm], m.corr_params)
    q = np.random.default_rng(2).uniform(-1, 1, (40, 2))
    assert np.allclose(m.predict(q), m2.predict(q), atol=1e-9)
    assert np.allclose(m.mse(q), m2.mse(q), atol=1e-9 * m.sigma2)


def test_optimizer_beats_random_probes_and_trace_is_consistent():
    x, y, m = random_fit(21, k=10, n=2)
    best = concentrated_loglik(x, y, m.corr_params)
    assert best >= max(f for _, f in m.trace) - 1e-9
    running = np.maximum.accumulate([f for _, f in m.trace])
    assert np.all(running[1:] >= running[:-1])
    rng = np.random.default_rng(5)
    for _ in range(100):
        probe = 10.0 ** rng.uniform(-3, 3, size=2)
        assert best >= concentrated_loglik(x, y, probe) - 1e-9


def test_indicator_covariance():
    x, y, m = random_fit(3, k=6, n=2)
    amb = AmbiguityDistribution(np.array([[0.5, 0.5]]), [3])
    assert add_indicator_covariance(m, amb, 0.0) is m
    assert add_indicator_covariance(m, AmbiguityDistribution.empty(2), 1.0) is m
    inflated = add_indicator_covariance(m, amb, 2.0, bandwidth=0.1)
    q = np.array([[0.5, 0.5], [-0.9, -0.9]])
    ratio = inflated.mse(q) / m.mse(q)
    assert ratio[0] == pytest.approx(3.0)
    assert ratio[0] > ratio[1]
    assert np.array_equal(inflated.predict(q), m.predict(q))


def test_json_round_trip():
    x, y, m = random_fit(8, k=5, n=2)
    inflated = add_indicator_covariance(m, AmbiguityDistribution(np.array([[0.1, 0.2]]), [2]), 1.5, 0.1)
    back = KrigingModel.from_json(inflated.to_json())
    q = np.random.default_rng(0).uniform(-1, 1, (10, 2))
    assert np.array_equal(back.predict(q), inflated.predict(q))
    assert np.array_equal(back.mse(q), inflated.mse(q))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_grid_spike_density_matches_pairwise_sum(n):
    g = grid_axes(n, 41 if n < 3 else 17)
    rng = np.random.default_rng(n)
    idx = rng.choice(len(g), min(len(g) // 2, 800), replace=False)
    counts = rng.integers(2, 6, len(idx))
    fast = spike_density(g, g[idx], counts, 0.1)
    d2 = ((g[:, None, :] - g[idx][None, :, :]) ** 2).sum(axis=2)
    direct = np.exp(-0.5 * d2 / 0.01) @ counts / counts.sum()
    assert np.allclose(fast, direct, rtol=0, atol=1e-15)
    # scattered query points take the blocked pairwise path
    q = rng.uniform(-1, 1, (50, n))
    d2q = ((q[:, None, :] - g[idx][None, :, :]) ** 2).sum(axis=2)
    assert np.allclose(spike_density(q, g[idx], counts, 0.1, chunk_cells=1000),
                       np.exp(-0.5 * d2q / 0.01) @ counts / counts.sum(), rtol=0, atol=1e-15)
