import math
from dataclasses import replace

import numpy as np
import pytest

from swaymeter.errors import LengthMismatch
from swaymeter.evaluation import (
    SweepRunError,
    direction_correct,
    evaluate,
    noise_sweep,
    run,
    settings_for_noise,
)
from swaymeter.planar import Direction, DisplacementSample2D
from swaymeter.simulator import NoiseModel, SimulationConfig, VibrationComponent, make_trajectory

HALF_PI = math.pi / 2


def x_cfg(**kw):
    return SimulationConfig(
        refs=((0.0, 0.0), (4.0, 0.0)), radar0=(1.0, 2.0),
        vibration=(VibrationComponent((1.0, 0.0), 0.005, 2.0, HALF_PI),), **kw,
    )


def perfect_samples(truth):
    out = []
    for k in range(1, truth.n_frames):
        d = truth.displacement(k, k - 1)
        label = Direction.RIGHT if d[0] > 0 else Direction.LEFT
        out.append(DisplacementSample2D(k, d[0], d[1], float(np.linalg.norm(d)), label, 0.0, 0.0, k_prev=k - 1))
    return out


class TestEvaluate:
    def test_identical_to_truth(self):
        truth = make_trajectory(x_cfg())
        rep = evaluate(perfect_samples(truth), truth)
        assert rep.rmse_r == 0.0 and rep.max_error_r == 0.0
        assert all(v == 0.0 for v in rep.rmse_components.values())
        assert rep.direction_accuracy == 1.0
        assert rep.amplitude_error["x"] == pytest.approx(0.0, abs=1e-15)
        assert rep.n_gaps == 0

    def test_constant_offset(self):
        truth = make_trajectory(x_cfg())
        est = [replace(s, r=s.r + 0.001) for s in perfect_samples(truth)]
        assert evaluate(est, truth).rmse_r == pytest.approx(0.001, rel=1e-9)

    def test_noiseless_pipeline(self):
        rep = run(x_cfg(), "x").report
        assert rep.rmse_r < 1e-9

    def test_length_mismatch(self):
        truth = make_trajectory(x_cfg())
        with pytest.raises(LengthMismatch):
            evaluate(perfect_samples(truth)[:-1], truth)

    def test_gaps_excluded_and_counted(self):
        truth = make_trajectory(x_cfg())
        est = perfect_samples(truth)
        est[5] = DisplacementSample2D.gap_marker(est[5].k, 4)
        d = truth.displacement(7, 5)
        est[6] = replace(est[6], dx=d[0], r=abs(d[0]), k_prev=5)
        rep = evaluate(est, truth)
        assert rep.n_gaps == 1
        assert rep.max_error_r == pytest.approx(0.0, abs=1e-18)

    def test_default_activity_threshold(self):
        truth = make_trajectory(x_cfg())
        assert evaluate(perfect_samples(truth), truth).activity_threshold == pytest.approx(0.05 * 0.005)

    def test_wrong_directions_counted(self):
        truth = make_trajectory(x_cfg())
        est = [replace(s, direction=Direction.UP) for s in perfect_samples(truth)]
        assert evaluate(est, truth).direction_accuracy == 0.0


def test_direction_correct_wildcards():
    d = np.array([0.01, 1e-9])
    assert direction_correct("Right", d, 1e-6)
    assert direction_correct("UpRight", d, 1e-6)
    assert not direction_correct("Left", d, 1e-6)
    assert not direction_correct("Indeterminate", d, 1e-6)
    assert not direction_correct("Stationary", d, 1e-6)
    assert direction_correct("+X-Z", np.array([0.1, 0.0, -0.2]), 1e-6)
    assert not direction_correct("+X", np.array([0.1, 0.0, -0.2]), 1e-6)


@pytest.mark.parametrize("mode", ["x", "y", "xy"])
def test_zero_noise_all_planar_modes(mode):
    axis = {"x": (1.0, 0.0), "y": (0.0, 1.0), "xy": (0.6, 0.8)}[mode]
    c = replace(x_cfg(), vibration=(VibrationComponent(axis, 0.005, 2.0, 0.4),))
    assert run(c, mode).report.max_error_r < 1e-9


def test_zero_noise_3d():
    c = SimulationConfig(refs=((0.0, 0.0, 0.0), (3.0, 0.0, 0.0), (0.0, 3.0, 0.0)), radar0=(1.0, 1.0, 2.0),
                         vibration=(VibrationComponent((1.0, 2.0, -1.0), 0.005, 2.0, 0.4),))
    assert run(c).report.max_error_r < 1e-9


def test_settings_for_noise():
    assert settings_for_noise(x_cfg()).tol_L == 1e-6
    noisy = settings_for_noise(x_cfg(noise=NoiseModel(0.001, 0.001)))
    assert 1e-6 < noisy.tol_L < 0.1
    assert noisy.eps_dir > 1e-12
    assert settings_for_noise(x_cfg(noise=NoiseModel(0.001)), tol_L=0.5).tol_L == 0.5


class TestNoiseSweep:
    def test_noiseless_level(self):
        rows = noise_sweep(x_cfg(n_frames=50), [0.0, 0.0], 2, mode="x")
        assert all(r.mean_rmse_r < 1e-9 for r in rows)

    def test_monotone_in_sigma_gamma(self):
        rows = noise_sweep(x_cfg(n_frames=100), [1e-4, 2e-4, 4e-4], 20, channel="gamma", mode="x")
        means = [r.mean_rmse_r for r in rows]
        assert means[0] < means[1] < means[2]

    def test_reproducible_and_worker_independent(self):
        base = x_cfg(n_frames=50, noise=NoiseModel(0.0, 1e-4), seed=11)
        a = noise_sweep(base, [0.0005, 0.001], 1, mode="x")
        b = noise_sweep(base, [0.0005, 0.001], 1, mode="x")
        assert a == b
        c = noise_sweep(base, [0.0005, 0.001], 1, mode="x", workers=2)
        assert a == c

    def test_needs_two_levels(self):
        with pytest.raises(ValueError):
            noise_sweep(x_cfg(), [0.001], 3)

    def test_failure_identifies_run(self):
        with pytest.raises(SweepRunError) as info:
            noise_sweep(x_cfg(n_frames=10, seed=4), [0.0, 0.001], 1, mode="3d")
        assert info.value.level == 0.0 and info.value.seed == 4
