"""Area-based measurement of planar radar vibration.

Three pairwise estimators share one contract: given the triangle states of
two frames they return the radar displacement between them in the baseline
frame (+dx toward reference B, +dy away from the baseline).

* X-swaying: the change of the sub-area difference ``Sa - Sb`` is ``h * dx``.
* Y-swaying: the change of the total area ``Sa + Sb`` is ``L / 2 * dy``.
* XY-swaying: both components from the change of the foot abscissa and height.

Coarse direction comes from the signs of the base-angle cosine changes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from swaymeter._series import cumulative_trace, fold_pairs
from swaymeter.errors import BaselineMismatch, DegenerateGeometry, EmptySeries
from swaymeter.geometry import H_MIN, L_MIN, Observation2D, TriangleState, solve_triangle


class Direction(str, Enum):
    RIGHT = "Right"
    LEFT = "Left"
    UP = "Up"
    DOWN = "Down"
    UP_RIGHT = "UpRight"
    UP_LEFT = "UpLeft"
    DOWN_RIGHT = "DownRight"
    DOWN_LEFT = "DownLeft"
    STATIONARY = "Stationary"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


# (sign dx, sign dy) implied by each label; Indeterminate implies nothing.
DIRECTION_SIGNS: dict[Direction, tuple[int, int]] = {
    Direction.RIGHT: (1, 0),
    Direction.LEFT: (-1, 0),
    Direction.UP: (0, 1),
    Direction.DOWN: (0, -1),
    Direction.UP_RIGHT: (1, 1),
    Direction.UP_LEFT: (-1, 1),
    Direction.DOWN_RIGHT: (1, -1),
    Direction.DOWN_LEFT: (-1, -1),
    Direction.STATIONARY: (0, 0),
}
_LABEL_FROM_SIGNS = {v: k for k, v in DIRECTION_SIGNS.items()}


class Mode(str, Enum):
    X = "x"
    Y = "y"
    XY = "xy"


@dataclass(frozen=True)
class EstimatorSettings:
    """Tolerances for the pairwise estimators.

    Attributes:
        tol_L: allowed relative disagreement of the baseline (or base edges)
            between two frames.
        eps_dir: dead band on cosine changes (X/Y rules); on displacements it
            is scaled by the mean baseline length.
    """

    tol_L: float = 1e-6
    eps_dir: float = 1e-12
    L_min: float = L_MIN
    h_min: float = H_MIN
    strict: bool = False
    S_min: float = 1e-12
    V_min: float = 1e-12
    tol_consistency: float = 1e-6


DEFAULT_SETTINGS = EstimatorSettings()


@dataclass(frozen=True)
class DisplacementSample2D:
    """Radar displacement between frames ``k_prev`` and ``k``.

    Gap markers have ``gap=True``, NaN numeric fields and ``direction=None``.
    """

    k: int
    dx: float
    dy: float
    r: float
    direction: Direction | None
    dcosA: float
    dcosB: float
    k_prev: int | None = None
    gap: bool = False
    reason: str = ""

    @property
    def components(self) -> tuple[float, float]:
        return (self.dx, self.dy)

    @property
    def label(self) -> str | None:
        return None if self.direction is None else self.direction.value

    @classmethod
    def gap_marker(cls, k: int, k_prev: int | None = None, reason: str = "") -> "DisplacementSample2D":
        nan = math.nan
        return cls(k, nan, nan, nan, None, nan, nan, k_prev=k_prev, gap=True, reason=reason)


@dataclass(frozen=True)
class SeriesSummary:
    """Summary of a displacement series.

    ``amplitude_est`` maps each axis name to half the peak-to-peak extent of
    the cumulative displacement trace.
    """

    n_frames: int
    n_gaps: int
    amplitude_est: dict[str, float]
    mean_r: float
    max_r: float
    direction_histogram: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_frames": self.n_frames,
            "n_gaps": self.n_gaps,
            "amplitude_est": dict(self.amplitude_est),
            "mean_r": self.mean_r,
            "max_r": self.max_r,
            "direction_histogram": dict(self.direction_histogram),
        }


def _check_pair(prev: TriangleState, curr: TriangleState, settings: EstimatorSettings) -> tuple[float, float]:
    L_bar = 0.5 * (prev.L + curr.L)
    if abs(curr.L - prev.L) > settings.tol_L * L_bar:
        raise BaselineMismatch(
            f"baseline changed from {prev.L:.9g} m to {curr.L:.9g} m "
            f"(relative tolerance {settings.tol_L:.1e})",
            curr.k,
        )
    h_bar = 0.5 * (prev.h + curr.h)
    if h_bar < settings.h_min:
        raise DegenerateGeometry(f"mean height {h_bar:.3e} m below {settings.h_min:.1e} m", curr.k)
    return L_bar, h_bar


def classify_x(dcosA: float, dcosB: float, eps: float) -> Direction:
    """Left/right rule: A's cosine grows and B's shrinks when moving toward B."""
    if abs(dcosA) <= eps and abs(dcosB) <= eps:
        return Direction.STATIONARY
    if dcosA > eps and dcosB < -eps:
        return Direction.RIGHT
    if dcosA < -eps and dcosB > eps:
        return Direction.LEFT
    return Direction.INDETERMINATE


def classify_y(dcosA: float, dcosB: float, eps: float) -> Direction:
    """Up/down rule: both base-angle cosines shrink when the radar rises."""
    if abs(dcosA) <= eps and abs(dcosB) <= eps:
        return Direction.STATIONARY
    if dcosA <= eps and dcosB <= eps:
        return Direction.UP
    if dcosA >= -eps and dcosB >= -eps:
        return Direction.DOWN
    return Direction.INDETERMINATE


def classify_displacement(dx: float, dy: float, tol: float) -> Direction:
    sx = 0 if abs(dx) <= tol else (1 if dx > 0 else -1)
    sy = 0 if abs(dy) <= tol else (1 if dy > 0 else -1)
    return _LABEL_FROM_SIGNS[(sx, sy)]


def estimate_x(
    prev: TriangleState, curr: TriangleState, settings: EstimatorSettings = DEFAULT_SETTINGS
) -> DisplacementSample2D:
    """Along-baseline displacement from the change of ``Sa - Sb``.

    Raises:
        BaselineMismatch: baselines disagree beyond ``settings.tol_L``.
        DegenerateGeometry: mean height below ``settings.h_min``.
    """
    _, h_bar = _check_pair(prev, curr, settings)
    dD = (curr.Sa - curr.Sb) - (prev.Sa - prev.Sb)
    dx = dD / h_bar
    dcosA = curr.cosA - prev.cosA
    dcosB = curr.cosB - prev.cosB
    return DisplacementSample2D(
        k=curr.k, dx=dx, dy=0.0, r=abs(dx),
        direction=classify_x(dcosA, dcosB, settings.eps_dir),
        dcosA=dcosA, dcosB=dcosB, k_prev=prev.k,
    )


def estimate_y(
    prev: TriangleState, curr: TriangleState, settings: EstimatorSettings = DEFAULT_SETTINGS
) -> DisplacementSample2D:
    """Perpendicular displacement from the change of the total area ``Sa + Sb``."""
    L_bar, _ = _check_pair(prev, curr, settings)
    dS = (curr.Sa + curr.Sb) - (prev.Sa + prev.Sb)
    dy = dS / (0.5 * L_bar)
    dcosA = curr.cosA - prev.cosA
    dcosB = curr.cosB - prev.cosB
    return DisplacementSample2D(
        k=curr.k, dx=0.0, dy=dy, r=abs(dy),
        direction=classify_y(dcosA, dcosB, settings.eps_dir),
        dcosA=dcosA, dcosB=dcosB, k_prev=prev.k,
    )


def estimate_xy(
    prev: TriangleState, curr: TriangleState, settings: EstimatorSettings = DEFAULT_SETTINGS
) -> DisplacementSample2D:
    """Composite planar displacement; direction is a quadrant label."""
    L_bar, _ = _check_pair(prev, curr, settings)
    dx = curr.x - prev.x
    dy = curr.h - prev.h
    return DisplacementSample2D(
        k=curr.k, dx=dx, dy=dy, r=math.hypot(dx, dy),
        direction=classify_displacement(dx, dy, settings.eps_dir * L_bar),
        dcosA=curr.cosA - prev.cosA, dcosB=curr.cosB - prev.cosB, k_prev=prev.k,
    )


_ESTIMATORS = {Mode.X: estimate_x, Mode.Y: estimate_y, Mode.XY: estimate_xy}


def estimate_series(
    observations: Sequence[Observation2D],
    mode: Mode | str = Mode.XY,
    settings: EstimatorSettings = DEFAULT_SETTINGS,
) -> list[DisplacementSample2D]:
    """Run a pairwise estimator over consecutive frames.

    Returns one sample per frame after the first.  Frames that cannot be
    solved become gap markers; the next valid frame is paired with the last
    valid one (``k_prev`` records the span).
    """
    estimator = _ESTIMATORS[Mode(mode)]
    return fold_pairs(
        observations,
        lambda o: solve_triangle(o, L_min=settings.L_min, h_min=settings.h_min),
        lambda p, c: estimator(p, c, settings),
        DisplacementSample2D.gap_marker,
    )


def trace(samples: Sequence[DisplacementSample2D]) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative (x, h) trace relative to the first valid frame."""
    return cumulative_trace(samples, 2)


def _axes_for(samples: Iterable) -> tuple[str, ...]:
    for s in samples:
        return ("x", "y", "z")[: len(s.components)]
    return ()


def summarize(series: Sequence) -> SeriesSummary:
    """Summarize a 2D or 3D displacement series; gap markers are excluded.

    Raises:
        EmptySeries: no samples, or every sample is a gap.
    """
    if len(series) == 0:
        raise EmptySeries("cannot summarize an empty series")
    valid = [s for s in series if not s.gap]
    if not valid:
        raise EmptySeries("every sample in the series is a gap")
    axes = _axes_for(valid)
    _, positions = cumulative_trace(valid, len(axes))
    amplitude = {
        ax: float(0.5 * (positions[:, i].max() - positions[:, i].min())) for i, ax in enumerate(axes)
    }
    r = np.array([s.r for s in valid])
    hist = Counter(s.label for s in valid)
    return SeriesSummary(
        n_frames=len(series),
        n_gaps=len(series) - len(valid),
        amplitude_est=amplitude,
        mean_r=float(r.mean()),
        max_r=float(r.max()),
        direction_histogram=dict(sorted(hist.items())),
    )
