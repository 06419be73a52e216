"""Exception hierarchy.

Every error carries an optional frame index so that series-level code can
report where a failure happened without re-wrapping.
"""

from __future__ import annotations


class SwayError(Exception):
    """Base class for all swaymeter errors."""

    def __init__(self, message: str, frame: int | None = None):
        self.frame = frame
        if frame is not None:
            message = f"frame {frame}: {message}"
        super().__init__(message)


class InvalidObservation(SwayError, ValueError):
    """Observation fields violate their domain (non-positive range, angle outside (0, pi))."""


class DegenerateGeometry(SwayError):
    """Radar and references are (nearly) collinear / coplanar or coincident."""


class NumericalInconsistency(SwayError):
    """Observations admit no real Euclidean embedding."""


class BaselineMismatch(SwayError):
    """Reference baseline changed between frames beyond tolerance."""


class EmptySeries(SwayError, ValueError):
    pass


class LengthMismatch(SwayError, ValueError):
    pass


class InvalidConfig(SwayError, ValueError):
    pass
