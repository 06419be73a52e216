"""Self-vibration measurement of a swaying radar from reference-object geometry."""

from swaymeter.errors import (
    BaselineMismatch,
    DegenerateGeometry,
    EmptySeries,
    InvalidConfig,
    InvalidObservation,
    LengthMismatch,
    NumericalInconsistency,
    SwayError,
)
from swaymeter.geometry import (
    Observation2D,
    Observation3D,
    TetraState,
    TriangleState,
    cm_volume,
    solve_tetra,
    solve_triangle,
    triple_product_volume,
)
from swaymeter.planar import (
    DisplacementSample2D,
    EstimatorSettings,
    SeriesSummary,
    estimate_series,
    estimate_x,
    estimate_xy,
    estimate_y,
    summarize,
)
from swaymeter.spatial import (
    DisplacementSample3D,
    estimate_series_3d,
    estimate_spatial,
    solve_normal_component,
)
from swaymeter.simulator import (
    GroundTruth,
    NoiseModel,
    SimulationConfig,
    VibrationComponent,
    make_trajectory,
    observe,
)
from swaymeter.evaluation import EvalReport, SweepRow, evaluate, noise_sweep

__version__ = "0.1.0"

__all__ = [
    "BaselineMismatch",
    "DegenerateGeometry",
    "DisplacementSample2D",
    "DisplacementSample3D",
    "EmptySeries",
    "EstimatorSettings",
    "EvalReport",
    "GroundTruth",
    "InvalidConfig",
    "InvalidObservation",
    "LengthMismatch",
    "NoiseModel",
    "NumericalInconsistency",
    "Observation2D",
    "Observation3D",
    "SeriesSummary",
    "SimulationConfig",
    "SwayError",
    "SweepRow",
    "TetraState",
    "TriangleState",
    "VibrationComponent",
    "cm_volume",
    "estimate_series",
    "estimate_series_3d",
    "estimate_spatial",
    "estimate_x",
    "estimate_xy",
    "estimate_y",
    "evaluate",
    "make_trajectory",
    "noise_sweep",
    "observe",
    "solve_normal_component",
    "solve_tetra",
    "solve_triangle",
    "summarize",
    "triple_product_volume",
]
