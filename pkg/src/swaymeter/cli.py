"""Command-line interface: simulate, estimate, eval, demo, sweep.

Exit codes: 0 success, 1 demo threshold violated, 2 usage/config/parse
error, 3 degenerate geometry at simulate time.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import asdict
from importlib import resources
from pathlib import Path

from swaymeter.errors import DegenerateGeometry, EmptySeries, InvalidConfig, LengthMismatch, SwayError
from swaymeter.evaluation import MODES, estimate, evaluate, noise_sweep, settings_for_noise
from swaymeter.io import (
    FormatError,
    read_displacements,
    read_observations,
    read_truth,
    write_displacements,
    write_json,
    write_observations,
    write_truth,
)
from swaymeter.geometry import Observation3D
from swaymeter.planar import EstimatorSettings, summarize
from swaymeter.simulator import SimulationConfig, load_config, make_trajectory, observe

log = logging.getLogger("swaymeter")

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

DEMO_MODES = ("x", "y", "xy", "3d")
DEMO_RMSE_LIMIT = 1e-9


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _demo_config(mode: str) -> SimulationConfig:
    text = resources.files("swaymeter.configs").joinpath(f"demo_{mode}.json").read_text()
    return SimulationConfig.from_dict(json.loads(text))


def _apply_overrides(cfg: SimulationConfig, args) -> SimulationConfig:
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_seed(args.seed)
    if getattr(args, "sigma_d", None) is not None:
        cfg = cfg.with_noise(sigma_d=args.sigma_d)
    if getattr(args, "sigma_gamma", None) is not None:
        sg = math.radians(args.sigma_gamma) if args.degrees else args.sigma_gamma
        cfg = cfg.with_noise(sigma_gamma=sg)
    try:
        return cfg.validate()
    except InvalidConfig as exc:
        raise CliError(f"config error: {exc}") from None


def _load(args) -> SimulationConfig:
    try:
        cfg = load_config(args.config)
    except InvalidConfig as exc:
        raise CliError(f"config error: {exc}") from None
    except OSError as exc:
        raise CliError(f"cannot read config {args.config}: {exc.strerror}") from None
    return _apply_overrides(cfg, args)


def _settings(args, cfg: SimulationConfig | None = None) -> EstimatorSettings:
    overrides = {"strict": bool(getattr(args, "strict", False))}
    if getattr(args, "tol_baseline", None) is not None:
        overrides["tol_L"] = args.tol_baseline
    if getattr(args, "eps_dir", None) is not None:
        overrides["eps_dir"] = args.eps_dir
    if cfg is not None:
        return settings_for_noise(cfg, **overrides)
    return EstimatorSettings(**overrides)


# ---------------------------------------------------------------------------
# pipeline stages (shared by the subcommands and the demo)


def do_simulate(cfg: SimulationConfig, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    truth = make_trajectory(cfg)
    try:
        obs = observe(truth, cfg)
    except DegenerateGeometry as exc:
        raise CliError(f"degenerate geometry: {exc}", EXIT_DEGENERATE) from None
    write_json(out / "config.json", cfg.to_dict())
    write_observations(out / "observations.csv", obs)
    write_truth(out / "truth.csv", truth)
    print(f"simulated {len(obs)} frames (seed {cfg.seed}) -> {out}")
    return len(obs)


def do_estimate(obs_path: Path, mode: str, out: Path, settings: EstimatorSettings, degrees: bool = False):
    try:
        obs = read_observations(obs_path, degrees=degrees)
    except FormatError as exc:
        raise CliError(f"parse error: {exc}") from None
    if len(obs) < 2:
        raise CliError(f"{obs_path}: need at least 2 frames, got {len(obs)}")
    is3d = isinstance(obs[0], Observation3D)
    if (mode == "3d") != is3d:
        raise CliError(f"mode {mode!r} does not match {'3D' if is3d else '2D'} observations in {obs_path}")
    try:
        samples = estimate(obs, mode, settings)
    except SwayError as exc:
        raise CliError(f"estimate error: {exc}") from None
    out.mkdir(parents=True, exist_ok=True)
    write_displacements(out / "displacements.csv", samples)
    try:
        summary = summarize(samples).to_dict()
    except EmptySeries as exc:
        raise CliError(f"no usable frames: {exc}", EXIT_DEGENERATE) from None
    summary["mode"] = mode
    summary["settings"] = asdict(settings)
    write_json(out / "summary.json", summary)
    amp = ", ".join(f"{k}={v:.6g} m" for k, v in summary["amplitude_est"].items())
    print(f"estimated {len(samples)} samples ({summary['n_gaps']} gaps), amplitude {amp}")
    return samples, summary


def do_eval(est_path: Path, truth_path: Path, out: Path, activity: float | None = None):
    try:
        samples = read_displacements(est_path)
        truth = read_truth(truth_path)
    except FormatError as exc:
        raise CliError(f"parse error: {exc}") from None
    if samples and len(samples[0].components) != truth.frame_positions.shape[1]:
        raise CliError("estimate and truth dimensionality differ")
    try:
        report = evaluate(samples, truth, activity)
    except LengthMismatch as exc:
        raise CliError(f"length mismatch: {exc}") from None
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "report.json", report.to_dict())
    print(
        f"rmse_r={report.rmse_r:.3e} m  max|err r|={report.max_error_r:.3e} m  "
        f"direction_accuracy={report.direction_accuracy:.4f}  gaps={report.n_gaps}"
    )
    return report


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    do_simulate(_load(args), Path(args.out))
    return EXIT_OK


def cmd_estimate(args) -> int:
    do_estimate(Path(args.observations), args.mode, Path(args.out), _settings(args), degrees=args.degrees)
    return EXIT_OK


def cmd_eval(args) -> int:
    do_eval(Path(args.estimates), Path(args.truth), Path(args.out), args.activity)
    return EXIT_OK


def cmd_demo(args) -> int:
    root = Path(args.out)
    failures = []
    for mode in DEMO_MODES:
        cfg = _apply_overrides(_demo_config(mode), args)
        out = root / mode
        print(f"[{mode}]")
        do_simulate(cfg, out)
        do_estimate(out / "observations.csv", mode, out, _settings(args, cfg))
        report = do_eval(out / "displacements.csv", out / "truth.csv", out, activity=args.activity)
        noiseless = cfg.noise.sigma_d == 0 and cfg.noise.sigma_gamma == 0 and cfg.noise.range_quant == 0
        if noiseless:
            if not (report.max_error_r < DEMO_RMSE_LIMIT and report.rmse_r < DEMO_RMSE_LIMIT):
                failures.append(f"{mode}: per-frame error {report.max_error_r:.3e} m >= {DEMO_RMSE_LIMIT:g} m")
            if report.direction_accuracy != 1.0:
                failures.append(f"{mode}: direction accuracy {report.direction_accuracy:.4f} < 1")
        elif not math.isfinite(report.rmse_r):
            failures.append(f"{mode}: rmse_r is not finite")
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print("demo: all thresholds met" if not failures else f"demo: {len(failures)} threshold(s) violated")
    return EXIT_THRESHOLD if failures else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load(args)
    levels = args.levels
    if args.degrees and args.channel == "gamma":
        levels = [math.radians(v) for v in levels]
    try:
        rows = noise_sweep(cfg, levels, args.n_seeds, channel=args.channel, mode=args.mode, workers=args.workers)
    except (SwayError, ValueError) as exc:
        raise CliError(f"sweep error: {exc}") from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["sigma,mean_rmse_r,std_rmse_r,n_runs,n_gaps"]
    lines += [f"{r.sigma!r},{r.mean_rmse_r!r},{r.std_rmse_r!r},{r.n_runs},{r.n_gaps}" for r in rows]
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    for r in rows:
        print(f"sigma={r.sigma:.4g}  mean rmse_r={r.mean_rmse_r:.4e} m  std={r.std_rmse_r:.2e} m")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swaymeter", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def noise_flags(sp):
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--sigma-d", type=float, help="range noise std (m)")
        sp.add_argument("--sigma-gamma", type=float, help="angle noise std (rad, or deg with --degrees)")
        sp.add_argument("--degrees", action="store_true", help="angle arguments are in degrees")

    def est_flags(sp):
        sp.add_argument("--strict", action="store_true", help="reject flat tetrahedra (3D)")
        sp.add_argument("--tol-baseline", type=float, help="relative baseline tolerance between frames")
        sp.add_argument("--eps-dir", type=float, help="direction dead band")

    sp = sub.add_parser("simulate", help="generate observations and ground truth from a config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    noise_flags(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("estimate", help="estimate displacements from an observation CSV")
    sp.add_argument("observations")
    sp.add_argument("--mode", choices=MODES, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--degrees", action="store_true", help="angle columns are in degrees")
    est_flags(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("eval", help="score displacements against ground truth")
    sp.add_argument("estimates")
    sp.add_argument("truth")
    sp.add_argument("--out", required=True)
    sp.add_argument("--activity", type=float, help="activity threshold (m); default 5%% of true amplitude")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("demo", help="simulate, estimate and evaluate the bundled x/y/xy/3d configs")
    sp.add_argument("--out", default="demo_out")
    sp.add_argument("--activity", type=float, default=1e-6, help="activity threshold (m)")
    noise_flags(sp)
    est_flags(sp)
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("sweep", help="Monte Carlo noise sensitivity sweep")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--channel", choices=("d", "gamma"), default="d")
    sp.add_argument("--levels", type=float, nargs="+", required=True)
    sp.add_argument("--n-seeds", type=int, default=20)
    sp.add_argument("--workers", type=int, default=1)
    noise_flags(sp)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("SWAY_LOG", "WARNING").upper()
    logging.basicConfig(
        level=level if isinstance(logging.getLevelName(level), int) else "WARNING",
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
