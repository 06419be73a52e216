"""Per-frame triangle and tetrahedron reconstruction from range/angle observations.

Planar frame: origin at reference A, +u along the baseline toward reference B,
+v on the radar's side of the baseline.  Spatial frame: reference 1 at the
origin, reference 2 on +X, reference 3 in the XY half-plane with Y > 0, and
the radar at Z > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from swaymeter.errors import DegenerateGeometry, InvalidObservation, NumericalInconsistency

L_MIN = 1e-9
H_MIN = 1e-9
S_MIN = 1e-12
V_MIN = 1e-12
TOL_CONSISTENCY = 1e-6
CM_RTOL = 1e-12
# Heron and Cayley-Menger lose about sqrt(eps) relative accuracy near
# degeneracy; areas/volumes below this fraction of the edge scale are noise.
REL_FLOOR = 1e-7


@dataclass(frozen=True)
class Observation2D:
    """Ranges to references A and B and the angle they subtend at the radar."""

    k: int
    d1: float
    d2: float
    gamma: float


@dataclass(frozen=True)
class Observation3D:
    k: int
    d1: float
    d2: float
    d3: float
    gamma12: float
    gamma13: float
    gamma23: float

    @property
    def ranges(self) -> tuple[float, float, float]:
        return (self.d1, self.d2, self.d3)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.gamma12, self.gamma13, self.gamma23)


@dataclass(frozen=True)
class TriangleState:
    """Measurable geometry of the radar/reference triangle for one frame.

    ``x`` is the signed abscissa of the radar's perpendicular foot measured
    from reference A, so ``Sa`` and ``Sb`` are signed sub-areas whose sum is
    always the total area ``S``.
    """

    k: int
    L: float
    S: float
    cosA: float
    cosB: float
    x: float
    h: float
    Sa: float
    Sb: float


@dataclass(frozen=True)
class TetraState:
    k: int
    L12: float
    L13: float
    L23: float
    Sbase: float
    V: float
    ht: float
    X: float
    Y: float
    Z: float

    @property
    def position(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.Z])

    @property
    def mean_edge(self) -> float:
        return (self.L12 + self.L13 + self.L23) / 3.0


def _check_range(value: float, name: str, k: int) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise InvalidObservation(f"{name} must be a positive finite range, got {value!r}", k)


def _check_angle(value: float, name: str, k: int) -> None:
    if not (math.isfinite(value) and 0.0 < value < math.pi):
        raise InvalidObservation(f"{name} must lie in (0, pi), got {value!r}", k)


def law_of_cosines(a: float, b: float, gamma: float) -> float:
    """Length of the side opposite ``gamma``.

    Uses the half-angle form, which avoids cancellation for small angles.
    """
    s = math.sin(0.5 * gamma)
    return math.sqrt((a - b) ** 2 + 4.0 * a * b * s * s)


def solve_triangle(obs: Observation2D, *, L_min: float = L_MIN, h_min: float = H_MIN) -> TriangleState:
    """Reconstruct the triangle formed by the radar and two references.

    Raises:
        InvalidObservation: ranges not positive or angle outside (0, pi).
        DegenerateGeometry: baseline shorter than ``L_min`` or radar closer
            than ``h_min`` to the baseline line.
    """
    k = obs.k
    _check_range(obs.d1, "d1", k)
    _check_range(obs.d2, "d2", k)
    _check_angle(obs.gamma, "gamma", k)
    d1, d2 = obs.d1, obs.d2

    L = law_of_cosines(d1, d2, obs.gamma)
    if L < L_min:
        raise DegenerateGeometry(f"baseline length {L:.3e} m below {L_min:.1e} m", k)
    S = 0.5 * d1 * d2 * math.sin(obs.gamma)
    h = 2.0 * S / L
    if h < h_min:
        raise DegenerateGeometry(f"radar height {h:.3e} m above baseline below {h_min:.1e} m", k)

    x = (d1 * d1 + L * L - d2 * d2) / (2.0 * L)
    cosA = min(1.0, max(-1.0, x / d1))
    cosB = min(1.0, max(-1.0, (L - x) / d2))
    return TriangleState(
        k=k, L=L, S=S, cosA=cosA, cosB=cosB, x=x, h=h,
        Sa=0.5 * x * h, Sb=0.5 * (L - x) * h,
    )


def heron_area(a: float, b: float, c: float) -> float:
    """Triangle area from side lengths (Kahan's ordering for stability).

    Raises:
        InvalidObservation: the sides violate the triangle inequality.
    """
    a, b, c = sorted((a, b, c), reverse=True)
    p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    if p < 0.0:
        raise InvalidObservation(f"edges ({a}, {b}, {c}) violate the triangle inequality")
    return 0.25 * math.sqrt(p)


def cayley_menger_det(sq: Sequence[float]) -> float:
    """Cayley-Menger determinant of four points from six squared distances.

    ``sq`` is ordered (d01, d02, d03, d12, d13, d23), all squared.
    """
    d01, d02, d03, d12, d13, d23 = (float(v) for v in sq)
    m = np.array(
        [
            [0.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, d01, d02, d03],
            [1.0, d01, 0.0, d12, d13],
            [1.0, d02, d12, 0.0, d23],
            [1.0, d03, d13, d23, 0.0],
        ]
    )
    return float(np.linalg.det(m))


def cm_volume(sq: Sequence[float], *, rtol: float = CM_RTOL) -> float:
    """Tetrahedron volume from its six squared edge lengths.

    Args:
        sq: squared distances ordered (d01, d02, d03, d12, d13, d23).
        rtol: determinant tolerance relative to ``scale**6``, where ``scale``
            is the longest edge.

    Returns:
        ``sqrt(det / 288)``; exactly 0 when the determinant is slightly
        negative within tolerance.

    Raises:
        InvalidObservation: a squared distance is negative.
        NumericalInconsistency: determinant below ``-tol`` (no Euclidean
            embedding).
    """
    if len(sq) != 6:
        raise ValueError("expected six squared distances")
    if any(v < 0.0 or not math.isfinite(v) for v in sq):
        raise InvalidObservation("squared distances must be non-negative and finite")
    scale2 = max(sq)
    det = cayley_menger_det(sq)
    tol = rtol * scale2 ** 3
    if det < -tol:
        raise NumericalInconsistency(f"Cayley-Menger determinant {det:.3e} < 0: no Euclidean embedding")
    if det <= 0.0:
        return 0.0
    return math.sqrt(det / 288.0)


def triple_product_volume(p0, p1, p2, p3) -> float:
    """Tetrahedron volume from vertex coordinates."""
    p0 = np.asarray(p0, dtype=float)
    m = np.stack([np.asarray(p, dtype=float) - p0 for p in (p1, p2, p3)])
    return abs(float(np.linalg.det(m))) / 6.0


def solve_tetra(
    obs: Observation3D,
    *,
    strict: bool = False,
    S_min: float = S_MIN,
    V_min: float = V_MIN,
    tol_consistency: float = TOL_CONSISTENCY,
) -> TetraState:
    """Reconstruct the radar/reference tetrahedron and the radar's base-frame coordinates.

    Volume comes from the Cayley-Menger determinant; coordinates come from
    trilateration against the base triangle.  In ``strict`` mode a volume
    below ``V_min`` (radar in or crossing the base plane) is rejected.

    Both the base-area and volume checks add a floor of ``REL_FLOOR`` times
    the squared/cubed edge scale, below which the values are rounding noise.
    """
    k = obs.k
    for name, d in zip(("d1", "d2", "d3"), obs.ranges):
        _check_range(d, name, k)
    for name, g in zip(("gamma12", "gamma13", "gamma23"), obs.angles):
        _check_angle(g, name, k)
    d1, d2, d3 = obs.ranges

    L12 = law_of_cosines(d1, d2, obs.gamma12)
    L13 = law_of_cosines(d1, d3, obs.gamma13)
    L23 = law_of_cosines(d2, d3, obs.gamma23)
    try:
        Sbase = heron_area(L12, L13, L23)
    except InvalidObservation as exc:
        raise InvalidObservation(str(exc), k) from None
    scale = max(L12, L13, L23, d1, d2, d3)
    if Sbase < S_min + REL_FLOOR * max(L12, L13, L23) ** 2:
        raise DegenerateGeometry(f"base triangle area {Sbase:.3e} m^2 is degenerate (references collinear)", k)

    try:
        V = cm_volume((L12**2, L13**2, d1**2, L23**2, d2**2, d3**2))
    except NumericalInconsistency as exc:
        raise NumericalInconsistency(str(exc), k) from None
    if strict and V < V_min + REL_FLOOR * scale**3:
        raise DegenerateGeometry(f"tetrahedron volume {V:.3e} m^3 is degenerate (radar in base plane)", k)

    px = (L12**2 + L13**2 - L23**2) / (2.0 * L12)
    py = math.sqrt(max(L13**2 - px**2, 0.0))
    X = (d1**2 + L12**2 - d2**2) / (2.0 * L12)
    Y = (d1**2 + px**2 + py**2 - d3**2 - 2.0 * X * px) / (2.0 * py)
    z2 = d1**2 - X**2 - Y**2
    if z2 < -tol_consistency:
        raise NumericalInconsistency(f"d1^2 - X^2 - Y^2 = {z2:.3e} m^2: no real radar position", k)
    Z = math.sqrt(max(z2, 0.0))

    return TetraState(
        k=k, L12=L12, L13=L13, L23=L23, Sbase=Sbase, V=V,
        ht=3.0 * V / Sbase, X=X, Y=Y, Z=Z,
    )
