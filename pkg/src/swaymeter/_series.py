"""Series fold shared by the planar and spatial estimators."""

from __future__ import annotations

import logging
from typing import Callable, Sequence, TypeVar

import numpy as np

from swaymeter.errors import EmptySeries, InvalidObservation, SwayError

log = logging.getLogger(__name__)

Obs = TypeVar("Obs")
State = TypeVar("State")
Sample = TypeVar("Sample")


def fold_pairs(
    observations: Sequence[Obs],
    solve: Callable[[Obs], State],
    estimate: Callable[[State, State], Sample],
    make_gap: Callable[[int, int | None, str], Sample],
) -> list[Sample]:
    """Solve each frame and estimate displacement against the last valid frame.

    One sample per frame after the first.  A frame whose geometry fails, or
    whose pairing with the anchor fails, yields a gap marker and is not used
    as the next anchor, so the following sample spans the gap.
    """
    if len(observations) < 2:
        raise EmptySeries("need at least 2 frames")
    ks = [o.k for o in observations]
    for a, b in zip(ks, ks[1:]):
        if b <= a:
            raise InvalidObservation(f"frame indices must be strictly increasing ({a} then {b})", b)

    samples: list[Sample] = []
    anchor: State | None = None
    for i, obs in enumerate(observations):
        try:
            state = solve(obs)
        except SwayError as exc:
            log.warning("gap: %s", exc)
            if i > 0:
                samples.append(make_gap(obs.k, None if anchor is None else anchor.k, str(exc)))
            continue
        if anchor is None:
            if i > 0:
                samples.append(make_gap(obs.k, None, "no valid earlier frame"))
            anchor = state
            continue
        try:
            samples.append(estimate(anchor, state))
        except SwayError as exc:
            log.warning("gap: %s", exc)
            samples.append(make_gap(obs.k, anchor.k, str(exc)))
            continue
        anchor = state
    return samples


def cumulative_trace(samples: Sequence, n_axes: int) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate displacements into a trace anchored at the first valid frame.

    Returns:
        (frames, positions): frame indices of every valid anchor frame and the
        accumulated position at each, shape (m, n_axes).  Gap frames are absent.
    """
    frames: list[int] = []
    rows: list[np.ndarray] = []
    pos = np.zeros(n_axes)
    for s in samples:
        if s.gap:
            continue
        if not frames:
            frames.append(s.k_prev)
            rows.append(pos.copy())
        pos = pos + np.asarray(s.components, dtype=float)
        frames.append(s.k)
        rows.append(pos.copy())
    if not rows:
        return np.zeros(0, dtype=int), np.zeros((0, n_axes))
    return np.asarray(frames), np.vstack(rows)
