"""Deterministic ground truth and observation synthesis for a swaying radar.

Noise is drawn from PCG64 generators keyed by ``SeedSequence(seed,
spawn_key=(frame, channel))`` with channel 0 for ranges and channel 1 for
angles, so any single frame can be regenerated independently and the output
is bit-identical across platforms for a given (config, seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from swaymeter.errors import DegenerateGeometry, InvalidConfig
from swaymeter.geometry import Observation2D, Observation3D

ANGLE_EPS = 1e-9
MIN_OFFSET = 1e-9
RANGE_CHANNEL = 0
ANGLE_CHANNEL = 1


@dataclass(frozen=True)
class VibrationComponent:
    axis: tuple[float, ...]
    amplitude: float
    frequency: float
    phase: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "axis": list(self.axis),
            "amplitude": self.amplitude,
            "frequency": self.frequency,
            "phase": self.phase,
        }


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian range/angle noise with optional range quantization (bin size in meters)."""

    sigma_d: float = 0.0
    sigma_gamma: float = 0.0
    range_quant: float = 0.0

    def to_dict(self) -> dict[str, float]:
        return {"sigma_d": self.sigma_d, "sigma_gamma": self.sigma_gamma, "range_quant": self.range_quant}


@dataclass(frozen=True)
class SimulationConfig:
    """Reference layout, vibration model, noise and seed for one simulated run.

    The dimensionality is taken from ``radar0``: two references for a planar
    run, three for a spatial one.
    """

    refs: tuple[tuple[float, ...], ...]
    radar0: tuple[float, ...]
    vibration: tuple[VibrationComponent, ...] = ()
    fs: float = 100.0
    n_frames: int = 200
    noise: NoiseModel = field(default_factory=NoiseModel)
    seed: int = 0

    @property
    def dim(self) -> int:
        return len(self.radar0)

    def with_noise(self, **changes: float) -> "SimulationConfig":
        return replace(self, noise=replace(self.noise, **changes))

    def with_seed(self, seed: int) -> "SimulationConfig":
        return replace(self, seed=int(seed))

    def validate(self) -> "SimulationConfig":
        """Check the config invariants and return ``self``.

        Raises:
            InvalidConfig: naming the violated invariant.
        """
        dim = self.dim
        if dim not in (2, 3):
            raise InvalidConfig(f"radar0 must have 2 or 3 coordinates, got {dim}")
        if len(self.refs) != dim:
            raise InvalidConfig(f"a {dim}D run needs exactly {dim} references, got {len(self.refs)}")
        refs = np.asarray(self.refs, dtype=float)
        if refs.shape != (dim, dim) or not np.all(np.isfinite(refs)):
            raise InvalidConfig("references must be finite points with the same dimension as radar0")
        if not all(math.isfinite(c) for c in self.radar0):
            raise InvalidConfig("radar0 must be finite")
        for i in range(dim):
            for j in range(i + 1, dim):
                if np.linalg.norm(refs[i] - refs[j]) < MIN_OFFSET:
                    raise InvalidConfig(f"references must be distinct: ref {i} and ref {j} coincide")
        if dim == 3 and np.linalg.norm(np.cross(refs[1] - refs[0], refs[2] - refs[0])) < MIN_OFFSET:
            raise InvalidConfig("references must not be collinear")
        if _offset_from_refs(refs, np.asarray(self.radar0, dtype=float)) < MIN_OFFSET:
            kind = "collinear" if dim == 2 else "coplanar"
            raise InvalidConfig(f"radar0 must not be {kind} with the references")
        for c in self.vibration:
            if len(c.axis) != dim:
                raise InvalidConfig(f"vibration axis {c.axis} does not match dimension {dim}")
            if np.linalg.norm(c.axis) == 0.0:
                raise InvalidConfig("vibration axis must be non-zero")
            if not (c.amplitude >= 0.0):
                raise InvalidConfig(f"vibration amplitudes must be >= 0, got {c.amplitude}")
            if not (c.frequency >= 0.0):
                raise InvalidConfig(f"vibration frequencies must be >= 0, got {c.frequency}")
        if not (self.fs > 0.0):
            raise InvalidConfig(f"fs must be > 0, got {self.fs}")
        if int(self.n_frames) != self.n_frames or self.n_frames < 2:
            raise InvalidConfig(f"n_frames must be an integer >= 2, got {self.n_frames}")
        n = self.noise
        if not (n.sigma_d >= 0.0 and n.sigma_gamma >= 0.0 and n.range_quant >= 0.0):
            raise InvalidConfig("noise parameters must be >= 0")
        if not (0 <= self.seed < 2**64):
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        return self

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SimulationConfig":
        try:
            vib = tuple(
                VibrationComponent(
                    axis=tuple(float(a) for a in c["axis"]),
                    amplitude=float(c["amplitude"]),
                    frequency=float(c["frequency"]),
                    phase=float(c.get("phase", 0.0)),
                )
                for c in data.get("vibration", [])
            )
            noise = data.get("noise", {})
            cfg = cls(
                refs=tuple(tuple(float(v) for v in p) for p in data["refs"]),
                radar0=tuple(float(v) for v in data["radar0"]),
                vibration=vib,
                fs=float(data.get("fs", 100.0)),
                n_frames=int(data.get("n_frames", 200)),
                noise=NoiseModel(
                    sigma_d=float(noise.get("sigma_d", 0.0)),
                    sigma_gamma=float(noise.get("sigma_gamma", 0.0)),
                    range_quant=float(noise.get("range_quant", 0.0) or 0.0),
                ),
                seed=int(data.get("seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"malformed config: {exc!r}") from None
        return cfg.validate()

    def to_dict(self) -> dict[str, Any]:
        return {
            "refs": [list(p) for p in self.refs],
            "radar0": list(self.radar0),
            "vibration": [c.to_dict() for c in self.vibration],
            "fs": self.fs,
            "n_frames": self.n_frames,
            "noise": self.noise.to_dict(),
            "seed": self.seed,
        }


def load_config(path: str | Path) -> SimulationConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path}: invalid JSON ({exc})") from None
    return SimulationConfig.from_dict(data)


def _offset_from_refs(refs: np.ndarray, p: np.ndarray) -> float:
    """Distance from ``p`` to the reference line (2D) or plane (3D)."""
    if len(p) == 2:
        u = refs[1] - refs[0]
        w = p - refs[0]
        return abs(u[0] * w[1] - u[1] * w[0]) / np.linalg.norm(u)
    n = np.cross(refs[1] - refs[0], refs[2] - refs[0])
    return abs(float(np.dot(n, p - refs[0]))) / np.linalg.norm(n)


def reference_frame(refs: Sequence[Sequence[float]], radar0: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Origin and orthonormal basis (rows) of the frame the estimators report in.

    2D: +u from reference A toward B, +v toward the radar.  3D: +X from
    reference 1 toward 2, +Y toward reference 3 within the base plane, +Z
    toward the radar (which may make the basis left-handed).
    """
    refs = np.asarray(refs, dtype=float)
    p = np.asarray(radar0, dtype=float)
    o = refs[0]
    e1 = refs[1] - o
    e1 /= np.linalg.norm(e1)
    if refs.shape[1] == 2:
        e2 = np.array([-e1[1], e1[0]])
        if np.dot(p - o, e2) < 0:
            e2 = -e2
        return o, np.vstack([e1, e2])
    w = refs[2] - o
    e2 = w - np.dot(w, e1) * e1
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    if np.dot(p - o, e3) < 0:
        e3 = -e3
    return o, np.vstack([e1, e2, e3])


@dataclass(frozen=True)
class GroundTruth:
    """True radar trajectory.

    Attributes:
        t: frame times (s).
        positions: world-frame positions, shape (n_frames, dim).
        frame_positions: the same positions in the estimators' reference frame.
    """

    t: np.ndarray
    positions: np.ndarray
    frame_positions: np.ndarray

    @property
    def n_frames(self) -> int:
        return len(self.t)

    @property
    def displacements(self) -> np.ndarray:
        """Frame-to-frame displacement in the reference frame, shape (n_frames - 1, dim)."""
        return np.diff(self.frame_positions, axis=0)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.linalg.norm(self.displacements, axis=1)

    def displacement(self, k: int, k_prev: int) -> np.ndarray:
        return self.frame_positions[k] - self.frame_positions[k_prev]

    def axis_amplitudes(self) -> np.ndarray:
        """Half peak-to-peak of each reference-frame coordinate."""
        fp = self.frame_positions
        return 0.5 * (fp.max(axis=0) - fp.min(axis=0))


def make_trajectory(cfg: SimulationConfig) -> GroundTruth:
    """Sum-of-sinusoids trajectory sampled at ``k / fs``."""
    cfg.validate()
    t = np.arange(cfg.n_frames, dtype=float) / cfg.fs
    pos = np.tile(np.asarray(cfg.radar0, dtype=float), (cfg.n_frames, 1))
    for c in cfg.vibration:
        axis = np.asarray(c.axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        pos += np.outer(c.amplitude * np.sin(2.0 * math.pi * c.frequency * t + c.phase), axis)
    origin, basis = reference_frame(cfg.refs, cfg.radar0)
    return GroundTruth(t=t, positions=pos, frame_positions=(pos - origin) @ basis.T)


def frame_rng(seed: int, k: int, channel: int) -> np.random.Generator:
    """Generator for one (frame, channel) substream."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k, channel))))


def _angle(u: np.ndarray, v: np.ndarray) -> float:
    if len(u) == 2:
        cross = abs(u[0] * v[1] - u[1] * v[0])
    else:
        cross = float(np.linalg.norm(np.cross(u, v)))
    return math.atan2(cross, float(np.dot(u, v)))


def exact_measurements(refs: np.ndarray, p: np.ndarray) -> tuple[list[float], list[float]]:
    """Noiseless ranges to each reference and pairwise subtended angles (12, 13, 23 order)."""
    vecs = [r - p for r in refs]
    ranges = [float(np.linalg.norm(v)) for v in vecs]
    n = len(vecs)
    angles = [_angle(vecs[i], vecs[j]) for i in range(n) for j in range(i + 1, n)]
    return ranges, angles


def observe(truth: GroundTruth, cfg: SimulationConfig) -> list[Observation2D] | list[Observation3D]:
    """Synthesize (optionally noisy) observations of the references for every frame.

    Raises:
        DegenerateGeometry: the radar is collinear/coplanar with the
            references at some frame (index attached).
    """
    refs = np.asarray(cfg.refs, dtype=float)
    noise = cfg.noise
    out = []
    for k, p in enumerate(truth.positions):
        if _offset_from_refs(refs, p) < MIN_OFFSET:
            kind = "collinear" if cfg.dim == 2 else "coplanar"
            raise DegenerateGeometry(f"radar is {kind} with the references", k)
        ranges, angles = exact_measurements(refs, p)
        if noise.range_quant > 0.0:
            q = noise.range_quant
            ranges = [round(d / q) * q for d in ranges]
        if noise.sigma_d > 0.0:
            dn = frame_rng(cfg.seed, k, RANGE_CHANNEL).standard_normal(len(ranges))
            ranges = [d + noise.sigma_d * float(e) for d, e in zip(ranges, dn)]
        if noise.sigma_gamma > 0.0:
            gn = frame_rng(cfg.seed, k, ANGLE_CHANNEL).standard_normal(len(angles))
            angles = [
                min(math.pi - ANGLE_EPS, max(ANGLE_EPS, g + noise.sigma_gamma * float(e)))
                for g, e in zip(angles, gn)
            ]
        if cfg.dim == 2:
            out.append(Observation2D(k, ranges[0], ranges[1], angles[0]))
        else:
            out.append(Observation3D(k, *ranges, *angles))
    return out


def simulate(cfg: SimulationConfig):
    """Trajectory and observations in one call."""
    truth = make_trajectory(cfg)
    return truth, observe(truth, cfg)
