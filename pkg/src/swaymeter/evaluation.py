"""Compare estimated displacement series against simulated ground truth."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from swaymeter.errors import LengthMismatch, SwayError
from swaymeter.planar import DIRECTION_SIGNS, Direction, EstimatorSettings, estimate_series, summarize
from swaymeter.simulator import GroundTruth, SimulationConfig, exact_measurements, make_trajectory, observe
from swaymeter.spatial import estimate_series_3d, octant_signs

MODES = ("x", "y", "xy", "3d")
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class EvalReport:
    """Per-run error statistics.  Gap samples are excluded from every error field."""

    rmse_r: float
    max_error_r: float
    rmse_components: dict[str, float]
    max_error_components: dict[str, float]
    amplitude_error: dict[str, float]
    direction_accuracy: float
    activity_threshold: float
    n_samples: int
    n_active: int
    n_gaps: int

    def to_dict(self) -> dict:
        return asdict(self)


def label_signs(label: str | None, dim: int) -> tuple[int, ...] | None:
    if label is None:
        return None
    if dim == 3:
        return octant_signs(label)
    try:
        return DIRECTION_SIGNS.get(Direction(label))
    except ValueError:
        return None


def direction_correct(label: str | None, true_disp: np.ndarray, threshold: float) -> bool:
    """Componentwise sign match; true components at or below ``threshold`` match anything."""
    signs = label_signs(label, len(true_disp))
    if signs is None:
        return False
    for s, v in zip(signs, true_disp):
        if abs(v) <= threshold:
            continue
        if s != (1 if v > 0 else -1):
            return False
    return True


def evaluate(estimates: Sequence, truth: GroundTruth, activity_threshold: float | None = None) -> EvalReport:
    """Score an estimated series against ground truth.

    Args:
        estimates: one sample per frame after the first (gap markers included).
        truth: the simulated trajectory.
        activity_threshold: frames with true displacement at or below this are
            skipped for direction accuracy, and per-axis true components at
            or below it are wildcards.  Defaults to 5% of the largest true
            per-axis amplitude.

    Raises:
        LengthMismatch: the series does not cover ``truth.n_frames - 1`` frames.
    """
    if len(estimates) != truth.n_frames - 1:
        raise LengthMismatch(
            f"{len(estimates)} estimates for {truth.n_frames} truth frames (expected {truth.n_frames - 1})"
        )
    dim = truth.frame_positions.shape[1]
    true_amp = truth.axis_amplitudes()
    if activity_threshold is None:
        activity_threshold = 0.05 * float(true_amp.max())

    err_r, err_c = [], []
    n_active = n_correct = n_gaps = 0
    for s in estimates:
        if not 0 <= s.k < truth.n_frames:
            raise LengthMismatch(f"estimate frame {s.k} outside truth range", s.k)
        if s.gap:
            n_gaps += 1
            continue
        if s.k_prev is None or not 0 <= s.k_prev < s.k:
            raise LengthMismatch(f"estimate at frame {s.k} has invalid k_prev {s.k_prev}", s.k)
        d_true = truth.displacement(s.k, s.k_prev)
        r_true = float(np.linalg.norm(d_true))
        err_r.append(s.r - r_true)
        err_c.append(np.asarray(s.components, dtype=float) - d_true)
        if r_true > activity_threshold:
            n_active += 1
            n_correct += direction_correct(s.label, d_true, activity_threshold)

    axes = AXES[:dim]
    if err_r:
        er = np.asarray(err_r)
        ec = np.vstack(err_c)
        rmse_r = float(np.sqrt(np.mean(er**2)))
        max_r = float(np.max(np.abs(er)))
        rmse_c = {a: float(np.sqrt(np.mean(ec[:, i] ** 2))) for i, a in enumerate(axes)}
        max_c = {a: float(np.max(np.abs(ec[:, i]))) for i, a in enumerate(axes)}
        amp_est = summarize(estimates).amplitude_est
        amp_err = {a: abs(amp_est[a] - float(true_amp[i])) for i, a in enumerate(axes)}
    else:
        rmse_r = max_r = math.nan
        rmse_c = {a: math.nan for a in axes}
        max_c = dict(rmse_c)
        amp_err = dict(rmse_c)
    return EvalReport(
        rmse_r=rmse_r,
        max_error_r=max_r,
        rmse_components=rmse_c,
        max_error_components=max_c,
        amplitude_error=amp_err,
        direction_accuracy=n_correct / n_active if n_active else 1.0,
        activity_threshold=float(activity_threshold),
        n_samples=len(estimates),
        n_active=n_active,
        n_gaps=n_gaps,
    )


def settings_for_noise(cfg: SimulationConfig, **overrides) -> EstimatorSettings:
    """Estimator tolerances scaled to the configured observation noise.

    Noiseless configs get the defaults.  Otherwise the baseline tolerance and
    the direction dead band are widened to a 6-sigma / 3-sigma bound on the
    frame-to-frame change the noise alone can cause.
    """
    n = cfg.noise
    if n.sigma_d == 0.0 and n.sigma_gamma == 0.0 and n.range_quant == 0.0:
        return EstimatorSettings(**overrides)
    refs = np.asarray(cfg.refs, dtype=float)
    ranges, _ = exact_measurements(refs, np.asarray(cfg.radar0, dtype=float))
    d_max, d_min = max(ranges), min(ranges)
    edges = [np.linalg.norm(refs[i] - refs[j]) for i in range(len(refs)) for j in range(i + 1, len(refs))]
    sigma_range = n.sigma_d + n.range_quant / math.sqrt(12.0)
    sigma_edge = math.sqrt(2.0) * sigma_range + d_max * n.sigma_gamma
    params = {
        "tol_L": 1e-6 + 6.0 * math.sqrt(2.0) * sigma_edge / min(edges),
        "eps_dir": 1e-12 + 3.0 * math.sqrt(2.0) * (sigma_range / d_min + n.sigma_gamma),
    }
    params.update(overrides)
    return EstimatorSettings(**params)


def estimate(observations, mode: str, settings: EstimatorSettings):
    if mode == "3d":
        return estimate_series_3d(observations, settings)
    return estimate_series(observations, mode, settings)


@dataclass
class RunResult:
    truth: GroundTruth
    observations: list
    samples: list
    report: EvalReport
    settings: EstimatorSettings = field(default_factory=EstimatorSettings)


def run(
    cfg: SimulationConfig,
    mode: str | None = None,
    settings: EstimatorSettings | None = None,
    activity_threshold: float | None = None,
) -> RunResult:
    """Simulate, estimate and evaluate one configuration."""
    mode = mode or ("3d" if cfg.dim == 3 else "xy")
    if (mode == "3d") != (cfg.dim == 3):
        raise ValueError(f"mode {mode!r} does not match a {cfg.dim}D configuration")
    settings = settings or settings_for_noise(cfg)
    truth = make_trajectory(cfg)
    obs = observe(truth, cfg)
    samples = estimate(obs, mode, settings)
    return RunResult(truth, obs, samples, evaluate(samples, truth, activity_threshold), settings)


class SweepRunError(SwayError):
    """A run inside a noise sweep failed; ``level`` and ``seed`` identify it."""

    def __init__(self, message: str, level: float, seed: int):
        self.level = level
        self.seed = seed
        super().__init__(f"sweep run (level={level!r}, seed={seed}) failed: {message}")


@dataclass(frozen=True)
class SweepRow:
    sigma: float
    mean_rmse_r: float
    std_rmse_r: float
    n_runs: int
    n_gaps: int


def _sweep_one(args) -> tuple[float, int]:
    cfg, mode, level, seed = args
    try:
        result = run(cfg, mode)
    except Exception as exc:  # noqa: BLE001 - re-raised with the run identity
        raise SweepRunError(repr(exc), level, seed) from exc
    return result.report.rmse_r, result.report.n_gaps


def noise_sweep(
    base: SimulationConfig,
    levels: Sequence[float],
    n_seeds: int,
    *,
    channel: str = "d",
    mode: str | None = None,
    workers: int = 1,
) -> list[SweepRow]:
    """Monte Carlo sensitivity of ``rmse_r`` to one noise parameter.

    Each level sets ``sigma_d`` (``channel="d"``) or ``sigma_gamma``
    (``channel="gamma"``) on top of ``base``; seeds are ``base.seed + i``.
    Rows come back in level order and are aggregated in seed order, so the
    result does not depend on ``workers``.
    """
    if len(levels) < 2:
        raise ValueError("noise_sweep needs at least 2 sigma levels")
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    field_name = {"d": "sigma_d", "gamma": "sigma_gamma"}[channel]
    jobs = [
        (base.with_noise(**{field_name: float(level)}).with_seed(base.seed + i), mode, float(level), base.seed + i)
        for level in levels
        for i in range(n_seeds)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_one, jobs))
    else:
        results = [_sweep_one(j) for j in jobs]

    rows = []
    for li, level in enumerate(levels):
        chunk = results[li * n_seeds : (li + 1) * n_seeds]
        rmse = np.array([r for r, _ in chunk])
        rows.append(
            SweepRow(
                sigma=float(level),
                mean_rmse_r=float(np.mean(rmse)),
                std_rmse_r=float(np.std(rmse, ddof=1)) if n_seeds > 1 else 0.0,
                n_runs=n_seeds,
                n_gaps=int(sum(g for _, g in chunk)),
            )
        )
    return rows
