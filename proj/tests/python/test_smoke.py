"""Smoke tests for the python bindings against the C++ core."""

import json
import math

import numpy as np
import pytest

import thinfilm2d as tf


@pytest.fixture
def grid():
    return tf.Grid(L=2 * math.pi, n=32)


def test_transform_round_trip(grid):
    rng = np.random.default_rng(3)
    vals = rng.standard_normal((32, 32)) + 0j
    coeffs = tf.to_fourier(grid, vals)
    back = tf.to_physical(grid, coeffs)
    assert np.max(np.abs(back - vals)) < 1e-12


def test_norms(grid):
    coeffs = np.zeros((32, 32), complex)
    coeffs[0, 0] = 1.0
    assert tf.sobolev_norm(grid, coeffs, 1.5) == pytest.approx(2 * math.pi)
    assert tf.lebesgue2_norm(grid, coeffs) == pytest.approx(2 * math.pi)


def test_symbol_and_kernel():
    p = tf.Params(R=2.0, kappa=1.0, alpha=2.0)
    assert tf.symbol_f(1.0, 1.0, p) == pytest.approx(4 - 4 * math.sqrt(2))
    o = tf.Params.limit_point()
    assert tf.kernel_hat(0.7, 1.0, 0.0, o) == pytest.approx(1.0)
    k1 = tf.kernel_hat(0.3, 2.0, 1.0, o) * tf.kernel_hat(0.4, 2.0, 1.0, o)
    assert k1 == pytest.approx(tf.kernel_hat(0.7, 2.0, 1.0, o), rel=1e-13)


def test_evolve_conserves_mean(grid):
    u0 = tf.random_band_field(grid, band=5, norm_s=0.0, amplitude=0.3, seed=11)
    u0[0, 0] = 0.2
    cfg = tf.StepperConfig(dt=1 / 128, save_every=8)
    times, states = tf.evolve(grid, u0, 0.25, tf.Params.limit_point(), cfg)
    assert times[0] == 0.0
    assert states.shape == (len(times), 32, 32)
    assert np.max(np.abs(states[:, 0, 0] - 0.2)) < 1e-12


def test_picard_matches_etd(grid):
    o = tf.Params.limit_point()
    u0 = tf.random_band_field(grid, band=5, norm_s=2.0, amplitude=0.1, seed=5)
    cfg = tf.StepperConfig(dt=1 / 64 / 32, save_every=8)
    tp, sp = tf.picard_solve(grid, u0, 1 / 64, o, cfg, s=2.0, s1=-1.0)
    te, se = tf.evolve(grid, u0, 1 / 64, o, cfg)
    gap = tf.sobolev_norm(grid, sp[-1] - se[-1], 2.0)
    assert gap < 1e-5


def test_inflation_norm_matches_reference():
    grid = tf.Grid(L=2 * math.pi, n=192)
    cfg = tf.IllposedConfig(N=8, r=4, s=-3.0, t=0.01)
    value = tf.inflation_norm(grid, cfg, tf.Params.limit_point())
    assert value == pytest.approx(9.278559728546837e-07, rel=1e-9)
    v0 = tf.indicator_data(grid, cfg, "A1")
    assert np.count_nonzero(v0) == 16


def test_high_freq_bound(grid):
    b = tf.high_freq_bound(grid, tf.Params.limit_point(), margin=1.0)
    assert b.M == pytest.approx(3.0)
    assert b.eta == pytest.approx(2 / 3)
    assert b.violations == 0


def test_run_json(tmp_path):
    config = {
        "experiment": "kernel-check",
        "grid": {"n": 32},
        "kernel_check": {"lambdas": [0, 2], "t_count": 4},
        "output_dir": str(tmp_path / "out"),
        "seed": 3,
    }
    result = tf.run_json(json.dumps(config))
    assert result["exit_code"] == 0
    assert any(a.endswith("kernel_check.csv") for a in result["artifacts"])


def test_config_error_is_typed():
    with pytest.raises(tf.ConfigError):
        tf.run_json('{"experiment": "simulate", "params": {"alpha": 3.0}}')
