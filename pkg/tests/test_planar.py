import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import planar_obs
from swaymeter.errors import BaselineMismatch, EmptySeries, InvalidObservation
from swaymeter.geometry import Observation2D, solve_triangle
from swaymeter.planar import (
    Direction,
    EstimatorSettings,
    classify_x,
    classify_y,
    estimate_series,
    estimate_x,
    estimate_xy,
    estimate_y,
    summarize,
    trace,
)

L = 4.0


def state(x, h, k=0, B=(L, 0.0)):
    return solve_triangle(Observation2D(k, *planar_obs((x, h), B=B)))


class TestEstimateX:
    def test_step_right(self):
        s = estimate_x(state(1.0, 2.0, 0), state(1.5, 2.0, 1))
        assert s.dx == pytest.approx(0.5, abs=1e-12)
        assert s.dy == 0.0
        assert s.r == pytest.approx(0.5, abs=1e-12)
        assert s.direction is Direction.RIGHT
        assert s.dcosA == pytest.approx(0.1527864045, abs=1e-9)
        assert s.dcosB == pytest.approx(-0.0511814849, abs=1e-9)
        assert (s.k, s.k_prev) == (1, 0)

    def test_area_difference_form(self):
        a, b = state(1.0, 2.0), state(1.5, 2.0)
        assert (a.Sa - a.Sb) == pytest.approx(-2.0, rel=1e-12)
        assert (b.Sa - b.Sb) == pytest.approx(-1.0, rel=1e-12)

    def test_identity_is_stationary(self):
        a = state(1.0, 2.0)
        s = estimate_x(a, a)
        assert s.dx == 0.0 and s.r == 0.0
        assert s.direction is Direction.STATIONARY

    def test_step_left(self):
        s = estimate_x(state(1.5, 2.0), state(1.0, 2.0))
        assert s.dx == pytest.approx(-0.5, abs=1e-12)
        assert s.direction is Direction.LEFT

    def test_baseline_mismatch(self):
        with pytest.raises(BaselineMismatch):
            estimate_x(state(1.0, 2.0), state(1.0, 2.0, B=(4.01, 0.0)))

    def test_loose_tolerance_accepts(self):
        s = estimate_x(state(1.0, 2.0), state(1.0, 2.0, B=(4.01, 0.0)), EstimatorSettings(tol_L=0.01))
        assert math.isfinite(s.dx)


class TestEstimateY:
    def test_step_up(self):
        s = estimate_y(state(1.0, 2.0), state(1.0, 2.5))
        assert s.dy == pytest.approx(0.5, abs=1e-12)
        assert s.dx == 0.0
        assert s.direction is Direction.UP
        assert s.dcosA == pytest.approx(-0.0758229191, abs=1e-9)
        assert s.dcosB == pytest.approx(-0.0638290147, abs=1e-9)

    def test_total_area_form(self):
        assert state(1.0, 2.5).S - state(1.0, 2.0).S == pytest.approx(1.0, rel=1e-12)

    def test_step_down(self):
        s = estimate_y(state(1.0, 2.5), state(1.0, 2.0))
        assert s.dy == pytest.approx(-0.5, abs=1e-12)
        assert s.direction is Direction.DOWN

    def test_identity_is_stationary(self):
        a = state(1.0, 2.0)
        s = estimate_y(a, a)
        assert s.dy == 0.0 and s.direction is Direction.STATIONARY


class TestEstimateXY:
    def test_diagonal(self):
        s = estimate_xy(state(1.0, 2.0), state(1.5, 2.5))
        assert (s.dx, s.dy) == pytest.approx((0.5, 0.5), abs=1e-12)
        assert s.r == pytest.approx(0.7071068, abs=1e-7)
        assert s.direction is Direction.UP_RIGHT

    def test_pure_x_matches_estimate_x(self):
        a, b = state(1.0, 2.0), state(1.5, 2.0)
        s, sx = estimate_xy(a, b), estimate_x(a, b)
        assert s.dx == pytest.approx(sx.dx, abs=1e-10)
        assert s.dy == pytest.approx(0.0, abs=1e-10)
        assert s.direction is Direction.RIGHT

    def test_identity(self):
        a = state(1.0, 2.0)
        s = estimate_xy(a, a)
        assert s.r == 0.0 and s.direction is Direction.STATIONARY

    @pytest.mark.parametrize(
        "step, label",
        [((-0.1, 0.1), Direction.UP_LEFT), ((0.1, -0.1), Direction.DOWN_RIGHT),
         ((-0.1, -0.1), Direction.DOWN_LEFT), ((0.0, -0.2), Direction.DOWN), ((-0.2, 0.0), Direction.LEFT)],
    )
    def test_quadrant_labels(self, step, label):
        s = estimate_xy(state(1.0, 2.0), state(1.0 + step[0], 2.0 + step[1]))
        assert s.direction is label


@settings(max_examples=200, deadline=None)
@given(
    x=st.floats(-3.0, 7.0),
    h=st.floats(0.3, 6.0),
    step=st.floats(-0.05, 0.05).filter(lambda v: abs(v) > 1e-6),
)
def test_oracle_equivalence_pure_axis(x, h, step):
    a = state(x, h)
    sx = estimate_x(a, state(x + step, h))
    assert sx.dx == pytest.approx(step, abs=1e-9)
    sy = estimate_y(a, state(x, h + step))
    assert sy.dy == pytest.approx(step, abs=1e-9)
    sxy = estimate_xy(a, state(x + step, h - 0.7 * step))
    assert (sxy.dx, sxy.dy) == pytest.approx((step, -0.7 * step), abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-3.0, 7.0), h=st.floats(0.3, 6.0), step=st.floats(1e-4, 0.05))
def test_equation_form_fidelity(x, h, step):
    a, b = state(x, h), state(x, h + step)
    assert b.S - a.S == pytest.approx(0.5 * L * step, rel=1e-9)
    c = state(x + step, h)
    assert (c.Sa - c.Sb) - (a.Sa - a.Sb) == pytest.approx(h * step, rel=1e-9)


def test_classifiers_dead_band():
    assert classify_x(1e-13, -1e-13, 1e-12) is Direction.STATIONARY
    assert classify_x(1e-3, 1e-3, 1e-12) is Direction.INDETERMINATE
    assert classify_y(-1e-3, 0.0, 1e-12) is Direction.UP
    assert classify_y(0.0, 1e-3, 1e-12) is Direction.DOWN
    assert classify_y(-1e-3, 1e-3, 1e-12) is Direction.INDETERMINATE


def test_y_rule_outside_strip_is_indeterminate_not_wrong():
    s = estimate_y(state(-1.0, 2.0), state(-1.0, 2.01))
    assert s.dcosA > 0 and s.dcosB < 0
    assert s.direction is Direction.INDETERMINATE
    assert s.dy == pytest.approx(0.01, abs=1e-12)


def _series(points, start=0):
    return [Observation2D(start + i, *planar_obs(p)) for i, p in enumerate(points)]


class TestEstimateSeries:
    def test_static(self):
        out = estimate_series(_series([(1.0, 2.0)] * 3), "x")
        assert len(out) == 2
        assert all(s.r == 0.0 and s.direction is Direction.STATIONARY for s in out)

    def test_sinusoid_first_difference(self):
        t = np.arange(200) / 100.0
        xs = 1.0 + 0.005 * np.sin(2 * math.pi * 2.0 * t)
        out = estimate_series(_series([(x, 2.0) for x in xs]), "x")
        assert len(out) == 199
        np.testing.assert_allclose([s.dx for s in out], np.diff(xs), rtol=0, atol=1e-9)

    def test_degenerate_middle_frame_is_gap(self):
        obs = _series([(1.0, 2.0), (1.1, 2.0), (1.2, 2.0)])
        obs[1] = Observation2D(1, 1.0, 1.0, 1e-12)
        out = estimate_series(obs, "xy")
        assert len(out) == 2
        assert out[0].gap and out[0].k == 1 and math.isnan(out[0].dx)
        assert not out[1].gap and out[1].k_prev == 0
        assert out[1].dx == pytest.approx(0.2, abs=1e-12)

    def test_first_frame_failure(self):
        obs = _series([(1.0, 2.0), (1.1, 2.0), (1.2, 2.0)])
        obs[0] = Observation2D(0, 1.0, -1.0, 1.0)
        out = estimate_series(obs, "x")
        assert out[0].gap and out[0].k == 1
        assert out[1].k_prev == 1 and out[1].dx == pytest.approx(0.1, abs=1e-12)

    def test_baseline_jump_is_gap(self):
        obs = _series([(1.0, 2.0), (1.1, 2.0), (1.2, 2.0)])
        obs[1] = Observation2D(1, *planar_obs((1.1, 2.0), B=(4.5, 0.0)))
        out = estimate_series(obs, "y")
        assert out[0].gap and "baseline" in out[0].reason
        assert out[1].k_prev == 0

    def test_needs_two_frames(self):
        with pytest.raises(EmptySeries, match="at least 2 frames"):
            estimate_series(_series([(1.0, 2.0)]), "x")

    def test_frames_must_increase(self):
        obs = _series([(1.0, 2.0), (1.1, 2.0)])
        with pytest.raises(InvalidObservation):
            estimate_series([obs[1], obs[0]], "x")

    def test_cumulative_trace(self):
        pts = [(1.0, 2.0), (1.1, 2.05), (0.9, 1.97), (1.02, 2.0)]
        fr, pos = trace(estimate_series(_series(pts), "xy"))
        assert list(fr) == [0, 1, 2, 3]
        np.testing.assert_allclose(pos, np.array(pts) - pts[0], atol=1e-12)


class TestSummarize:
    def test_sinusoid_amplitude(self):
        t = np.arange(200) / 100.0
        xs = 1.0 + 0.005 * np.cos(2 * math.pi * 2.0 * t)
        summ = summarize(estimate_series(_series([(x, 2.0) for x in xs]), "x"))
        assert summ.amplitude_est["x"] == pytest.approx(0.005, abs=1e-9)
        assert summ.amplitude_est["y"] == 0.0
        assert summ.n_frames == 199

    def test_all_zero(self):
        summ = summarize(estimate_series(_series([(1.0, 2.0)] * 4), "xy"))
        assert summ.amplitude_est == {"x": 0.0, "y": 0.0}
        assert summ.direction_histogram == {"Stationary": 3}

    def test_single_sample(self):
        summ = summarize(estimate_series(_series([(1.0, 2.0), (1.2, 2.0)]), "x"))
        assert summ.n_frames == 1
        assert summ.direction_histogram == {"Right": 1}
        assert summ.amplitude_est["x"] == pytest.approx(0.1, abs=1e-12)

    def test_gaps_excluded(self):
        obs = _series([(1.0, 2.0), (1.1, 2.0), (1.2, 2.0)])
        obs[1] = Observation2D(1, 1.0, 1.0, 1e-12)
        summ = summarize(estimate_series(obs, "x"))
        assert summ.n_frames == 2 and summ.n_gaps == 1
        assert sum(summ.direction_histogram.values()) == 1

    def test_empty(self):
        with pytest.raises(EmptySeries):
            summarize([])
