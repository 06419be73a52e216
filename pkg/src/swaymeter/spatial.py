"""Volume-based measurement of spatial radar vibration with three references."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swaymeter._series import cumulative_trace, fold_pairs
from swaymeter.errors import BaselineMismatch, DegenerateGeometry
from swaymeter.geometry import Observation3D, TetraState, solve_tetra
from swaymeter.planar import DEFAULT_SETTINGS, EstimatorSettings

STATIONARY = "Stationary"
INDETERMINATE = "Indeterminate"
_OCTANT_RE = re.compile(r"([+-])([XYZ])")


@dataclass(frozen=True)
class DisplacementSample3D:
    """Radar displacement between frames ``k_prev`` and ``k`` in the base frame.

    ``octant`` lists the sign of every component above tolerance, e.g.
    ``"+X-Y"`` or ``"+Z"``; ``"Stationary"`` when none is.
    """

    k: int
    dX: float
    dY: float
    dZ: float
    r: float
    octant: str | None
    dV: float
    k_prev: int | None = None
    gap: bool = False
    reason: str = ""

    @property
    def components(self) -> tuple[float, float, float]:
        return (self.dX, self.dY, self.dZ)

    @property
    def label(self) -> str | None:
        return self.octant

    @classmethod
    def gap_marker(cls, k: int, k_prev: int | None = None, reason: str = "") -> "DisplacementSample3D":
        nan = math.nan
        return cls(k, nan, nan, nan, nan, None, nan, k_prev=k_prev, gap=True, reason=reason)


def octant_label(dX: float, dY: float, dZ: float, tol: float) -> str:
    if not all(math.isfinite(v) for v in (dX, dY, dZ)):
        return INDETERMINATE
    parts = [
        ("+" if v > 0 else "-") + axis
        for axis, v in zip("XYZ", (dX, dY, dZ))
        if abs(v) > tol
    ]
    return "".join(parts) if parts else STATIONARY


def octant_signs(label: str) -> tuple[int, int, int] | None:
    """Sign triple implied by an octant label (0 for omitted axes); None if uninformative."""
    if label == STATIONARY:
        return (0, 0, 0)
    signs = {"X": 0, "Y": 0, "Z": 0}
    pos = 0
    for m in _OCTANT_RE.finditer(label):
        if m.start() != pos:
            return None
        signs[m.group(2)] = 1 if m.group(1) == "+" else -1
        pos = m.end()
    if pos != len(label) or pos == 0:
        return None
    return (signs["X"], signs["Y"], signs["Z"])


def _check_pair(prev: TetraState, curr: TetraState, settings: EstimatorSettings) -> float:
    edges_prev = np.array([prev.L12, prev.L13, prev.L23])
    edges_curr = np.array([curr.L12, curr.L13, curr.L23])
    mean = 0.5 * (edges_prev + edges_curr)
    if np.any(np.abs(edges_curr - edges_prev) > settings.tol_L * mean):
        raise BaselineMismatch(
            f"base triangle changed from {edges_prev.tolist()} to {edges_curr.tolist()}", curr.k
        )
    S_bar = 0.5 * (prev.Sbase + curr.Sbase)
    if S_bar < settings.S_min:
        raise DegenerateGeometry(f"mean base area {S_bar:.3e} m^2 below {settings.S_min:.1e}", curr.k)
    return S_bar


def estimate_spatial(
    prev: TetraState, curr: TetraState, settings: EstimatorSettings = DEFAULT_SETTINGS
) -> DisplacementSample3D:
    """Full 3D displacement by differencing base-frame coordinates.

    The octant tolerance is ``settings.eps_dir`` times the mean base edge.
    """
    _check_pair(prev, curr, settings)
    dX, dY, dZ = curr.X - prev.X, curr.Y - prev.Y, curr.Z - prev.Z
    tol = settings.eps_dir * 0.5 * (prev.mean_edge + curr.mean_edge)
    return DisplacementSample3D(
        k=curr.k, dX=dX, dY=dY, dZ=dZ, r=math.sqrt(dX * dX + dY * dY + dZ * dZ),
        octant=octant_label(dX, dY, dZ, tol), dV=curr.V - prev.V, k_prev=prev.k,
    )


def solve_normal_component(
    prev: TetraState, curr: TetraState, settings: EstimatorSettings = DEFAULT_SETTINGS
) -> float:
    """Displacement along the base-plane normal from the volume change.

    Solves ``dV = Sbase_mean * r_n / 3``; positive means away from the base.
    """
    S_bar = _check_pair(prev, curr, settings)
    return 3.0 * (curr.V - prev.V) / S_bar


def estimate_series_3d(
    observations: Sequence[Observation3D], settings: EstimatorSettings = DEFAULT_SETTINGS
) -> list[DisplacementSample3D]:
    """3D analogue of :func:`swaymeter.planar.estimate_series`."""
    return fold_pairs(
        observations,
        lambda o: solve_tetra(
            o, strict=settings.strict, S_min=settings.S_min, V_min=settings.V_min,
            tol_consistency=settings.tol_consistency,
        ),
        lambda p, c: estimate_spatial(p, c, settings),
        DisplacementSample3D.gap_marker,
    )


def trace_3d(samples: Sequence[DisplacementSample3D]) -> tuple[np.ndarray, np.ndarray]:
    return cumulative_trace(samples, 3)
