"""Plain-text file formats.

Floats are written with ``repr`` (shortest round-tripping form), so every
write/read cycle is lossless.  Angles in files are radians unless a reader is
explicitly told otherwise.

observations.csv   ``k,d1,d2,gamma`` or ``k,d1,d2,d3,gamma12,gamma13,gamma23``
truth.csv          ``k,t,x,y[,z],fx,fy[,fz]`` (world and reference-frame positions)
displacements.csv  ``k,dx,dy[,dz],r,direction,gap,k_prev``; gap rows leave the
                   value fields empty and set ``gap=1``
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from swaymeter.errors import SwayError
from swaymeter.geometry import Observation2D, Observation3D
from swaymeter.planar import Direction, DisplacementSample2D
from swaymeter.simulator import GroundTruth
from swaymeter.spatial import DisplacementSample3D

OBS_HEADER_2D = ["k", "d1", "d2", "gamma"]
OBS_HEADER_3D = ["k", "d1", "d2", "d3", "gamma12", "gamma13", "gamma23"]
DISP_HEADER_2D = ["k", "dx", "dy", "r", "direction", "gap", "k_prev"]
DISP_HEADER_3D = ["k", "dx", "dy", "dz", "r", "direction", "gap", "k_prev"]


class FormatError(SwayError, ValueError):
    """Malformed input file; ``line`` is 1-based (header is line 1)."""

    def __init__(self, path: str | Path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_rows(path: str | Path, headers: Sequence[list[str]]) -> tuple[list[str], list[tuple[int, list[str]]]]:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            lines = list(csv.reader(fh))
    except OSError as exc:
        raise FormatError(path, 0, f"cannot read file ({exc.strerror})") from None
    if not lines:
        raise FormatError(path, 1, "empty file (missing header)")
    header = [h.strip() for h in lines[0]]
    if header not in headers:
        expected = " or ".join(",".join(h) for h in headers)
        raise FormatError(path, 1, f"unexpected header {','.join(header)!r}; expected {expected}")
    body = [(i + 2, row) for i, row in enumerate(lines[1:]) if any(c.strip() for c in row)]
    for lineno, row in body:
        if len(row) != len(header):
            raise FormatError(path, lineno, f"expected {len(header)} fields, got {len(row)}")
    return header, body


def _float(path, lineno: int, text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(path, lineno, f"{name}: not a number: {text!r}") from None


def _int(path, lineno: int, text: str, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(path, lineno, f"{name}: not an integer: {text!r}") from None


def write_observations(path: str | Path, observations: Sequence[Observation2D | Observation3D]) -> None:
    path = Path(path)
    if observations and isinstance(observations[0], Observation3D):
        rows = [[o.k, *map(_fmt, (*o.ranges, *o.angles))] for o in observations]
        _write_rows(path, OBS_HEADER_3D, rows)
    else:
        rows = [[o.k, _fmt(o.d1), _fmt(o.d2), _fmt(o.gamma)] for o in observations]
        _write_rows(path, OBS_HEADER_2D, rows)


def read_observations(path: str | Path, degrees: bool = False) -> list[Observation2D] | list[Observation3D]:
    """Read an observation CSV; ``degrees=True`` converts angle columns from degrees."""
    header, body = _read_rows(path, [OBS_HEADER_2D, OBS_HEADER_3D])
    conv = math.radians if degrees else float
    n_ranges = 2 if header == OBS_HEADER_2D else 3
    out = []
    for lineno, row in body:
        k = _int(path, lineno, row[0], "k")
        vals = [_float(path, lineno, row[i], header[i]) for i in range(1, len(header))]
        vals = vals[:n_ranges] + [conv(v) for v in vals[n_ranges:]]
        out.append(Observation2D(k, *vals) if n_ranges == 2 else Observation3D(k, *vals))
    return out


def write_truth(path: str | Path, truth: GroundTruth) -> None:
    dim = truth.positions.shape[1]
    axes = "xyz"[:dim]
    header = ["k", "t", *axes, *(f"f{a}" for a in axes)]
    rows = [
        [k, _fmt(truth.t[k]), *map(_fmt, truth.positions[k]), *map(_fmt, truth.frame_positions[k])]
        for k in range(truth.n_frames)
    ]
    _write_rows(Path(path), header, rows)


def read_truth(path: str | Path) -> GroundTruth:
    header, body = _read_rows(
        path, [["k", "t", "x", "y", "fx", "fy"], ["k", "t", "x", "y", "z", "fx", "fy", "fz"]]
    )
    dim = (len(header) - 2) // 2
    t, pos, fpos = [], [], []
    for expect, (lineno, row) in enumerate(body):
        if _int(path, lineno, row[0], "k") != expect:
            raise FormatError(path, lineno, f"truth frames must be 0..n-1 in order (expected k={expect})")
        vals = [_float(path, lineno, row[i], header[i]) for i in range(1, len(header))]
        t.append(vals[0])
        pos.append(vals[1 : 1 + dim])
        fpos.append(vals[1 + dim :])
    return GroundTruth(
        t=np.asarray(t), positions=np.asarray(pos).reshape(-1, dim), frame_positions=np.asarray(fpos).reshape(-1, dim)
    )


def write_displacements(path: str | Path, samples: Sequence) -> None:
    is3d = bool(samples) and isinstance(samples[0], DisplacementSample3D)
    rows = []
    for s in samples:
        k_prev = "" if s.k_prev is None else s.k_prev
        if s.gap:
            rows.append([s.k, *([""] * (len(s.components) + 2)), 1, k_prev])
        else:
            rows.append([s.k, *map(_fmt, s.components), _fmt(s.r), s.label, 0, k_prev])
    _write_rows(Path(path), DISP_HEADER_3D if is3d else DISP_HEADER_2D, rows)


def read_displacements(path: str | Path) -> list[DisplacementSample2D] | list[DisplacementSample3D]:
    header, body = _read_rows(path, [DISP_HEADER_2D, DISP_HEADER_3D])
    is3d = header == DISP_HEADER_3D
    n = 3 if is3d else 2
    out = []
    for lineno, row in body:
        k = _int(path, lineno, row[0], "k")
        gap = _int(path, lineno, row[n + 3], "gap")
        k_prev = None if row[n + 4].strip() == "" else _int(path, lineno, row[n + 4], "k_prev")
        if gap:
            cls = DisplacementSample3D if is3d else DisplacementSample2D
            out.append(cls.gap_marker(k, k_prev))
            continue
        comps = [_float(path, lineno, row[1 + i], header[1 + i]) for i in range(n)]
        r = _float(path, lineno, row[n + 1], "r")
        label = row[n + 2]
        if is3d:
            out.append(DisplacementSample3D(k, *comps, r, label, math.nan, k_prev=k_prev))
        else:
            try:
                direction = Direction(label)
            except ValueError:
                raise FormatError(path, lineno, f"unknown direction label {label!r}") from None
            out.append(DisplacementSample2D(k, *comps, r, direction, math.nan, math.nan, k_prev=k_prev))
    return out


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def write_json(path: str | Path, obj: Any) -> None:
    """Deterministic JSON: sorted keys, non-finite floats as null."""
    Path(path).write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")
