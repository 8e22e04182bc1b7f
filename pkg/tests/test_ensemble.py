"""Tests for ensemble averaging, seeding and the lambda scan."""

import numpy as np
import pytest

from slnoise import (
    BathParams,
    RunConfig,
    SIGMA_Z,
    SchemeId,
    SystemModel,
    TimeGrid,
    ZeroComponent,
    run_ensemble,
    sample_white,
    scan_lambda,
    seed_for,
    windowed_stats,
)

BATH = BathParams(beta=1.0, omega_c=25.0)
RHO0 = 0.5 * (np.eye(2) + SIGMA_Z)
MODEL = SystemModel(delta=1.0, epsilon=-1.0, alpha=0.05, rho0=RHO0)


def small_cfg(**kw):
    base = dict(
        scheme=SchemeId.ETANU_OPTIMISED,
        model=MODEL,
        grid=TimeGrid(dt=0.01, t_max=2.0),
        n_realizations=64,
        master_seed=5,
        bath=BATH,
        stats_window=20,
    )
    base.update(kw)
    return RunConfig(**base)


def test_seed_for_deterministic_and_distinct():
    a = seed_for(1, 0)
    b = seed_for(1, 0)
    assert a.entropy == b.entropy and a.spawn_key == b.spawn_key
    assert seed_for(1, 1).spawn_key != a.spawn_key
    assert seed_for(2, 0).entropy != a.entropy
    assert seed_for(1, 0, group=(3,)).spawn_key != a.spawn_key


def test_seed_for_streams_are_independent():
    grid = TimeGrid(dt=0.01, t_max=10.0)
    x = sample_white(grid, seed_for(0, 0), 1)[0]
    y = sample_white(grid, seed_for(0, 1), 1)[0]
    n = x.size
    corr = np.dot(x, y) / np.sqrt(np.dot(x, x) * np.dot(y, y))
    assert abs(corr) < 5.0 / np.sqrt(n)


def test_config_validation():
    with pytest.raises(ValueError):
        small_cfg(n_realizations=1)
    with pytest.raises(ValueError):
        small_cfg(bath=None)
    with pytest.raises(ValueError):
        small_cfg(stats_window=0)


def test_windowed_stats_constant_series():
    traces = np.ones((8, 50), dtype=complex)
    var, se = windowed_stats(traces, 10)
    assert np.all(var == 0.0)
    assert np.all(se == 0.0)


def test_windowed_stats_unit_variance():
    rng = np.random.default_rng(0)
    traces = rng.standard_normal((400, 100))
    var, se = windowed_stats(traces, 100)
    assert var[0] == pytest.approx(1.0, rel=0.05)
    assert se[0] == pytest.approx(np.sqrt(var[0] / 400), rel=1e-12)


def test_windowed_stats_window_pooling_shrinks_se():
    # pooling over a window multiplies the effective sample count, so the
    # pooled variance of white data is unchanged while per-window values
    # are smoother; compare window=1 scatter vs window=50
    rng = np.random.default_rng(1)
    traces = rng.standard_normal((50, 100))
    v1, _ = windowed_stats(traces, 1)
    v50, _ = windowed_stats(traces, 50)
    assert np.std(v50) < 0.5 * np.std(v1)
    assert np.unique(v50).size == 2  # one pooled value per window


def test_windowed_stats_rejects_oversized_window():
    with pytest.raises(ValueError):
        windowed_stats(np.ones((4, 10)), 11)


def test_force_nu_zero_keeps_trace_constant():
    stats = run_ensemble(small_cfg(), force_nu_zero=True)
    assert np.max(np.abs(stats.mean_tr - 1.0)) == 0.0
    assert np.all(stats.var_tr == 0.0)
    assert np.all(stats.diverged == 0)


def test_run_ensemble_deterministic():
    a = run_ensemble(small_cfg())
    b = run_ensemble(small_cfg())
    assert np.array_equal(a.mean_tr, b.mean_tr)
    assert np.array_equal(a.var_tr, b.var_tr)


def test_run_ensemble_batch_size_invariant():
    a = run_ensemble(small_cfg(), batch_size=16)
    b = run_ensemble(small_cfg(), batch_size=1000)
    assert np.allclose(a.mean_tr, b.mean_tr, rtol=1e-12, atol=1e-14)
    assert np.allclose(a.var_tr, b.var_tr, rtol=1e-10, atol=1e-14)


def test_mean_trace_near_unity():
    stats = run_ensemble(small_cfg(n_realizations=500))
    # the ensemble mean trace is 1 up to sampling error
    pull = np.abs(stats.mean_tr - 1.0) / np.maximum(stats.se_tr, 1e-15)
    assert np.max(pull) < 6.0
    assert stats.abs_mean_tr[0] == pytest.approx(1.0)


def test_rescaling_improves_final_se():
    base = run_ensemble(small_cfg(grid=TimeGrid(dt=0.01, t_max=10.0),
                                  n_realizations=400))
    scaled = run_ensemble(small_cfg(grid=TimeGrid(dt=0.01, t_max=10.0),
                                    n_realizations=400, lam=0.5))
    assert scaled.se_tr[-1] <= base.se_tr[-1]


def test_scan_lambda_repeated_values_identical():
    cfg = small_cfg()
    scan = scan_lambda(cfg, [0.5, 0.5, 2.0], runs_per_point=32)
    assert scan.se_final[0] == scan.se_final[1]
    assert scan.best_lambda in (0.5, 2.0)


def test_scan_lambda_rejects_schemes_without_pair():
    with pytest.raises(ZeroComponent):
        scan_lambda(small_cfg(scheme=SchemeId.CONVEX), [0.5], 16)
    with pytest.raises(ZeroComponent):
        scan_lambda(small_cfg(scheme=SchemeId.CONSTRAINED), [0.5], 16)


def test_scan_lambda_validates_grid():
    with pytest.raises(ValueError):
        scan_lambda(small_cfg(), [], 16)
    with pytest.raises(ValueError):
        scan_lambda(small_cfg(), [-1.0], 16)


def test_noise_grid_halves_step():
    cfg = small_cfg()
    ng = cfg.noise_grid()
    assert ng.dt == cfg.grid.dt / 2.0
    assert ng.t_max == cfg.grid.t_max
    # one noise sample for every RK4 half step
    assert ng.n_phys == 2 * (cfg.grid.n_phys - 1) + 1
