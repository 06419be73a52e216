"""Independent coordinate oracles.

These compute observations from known positions with elementary vector
algebra and share no code with the package.
"""

import math

import numpy as np
import pytest


def angle_at(p, q, r):
    """Angle at ``p`` between rays to ``q`` and ``r``."""
    u = np.subtract(q, p, dtype=float)
    v = np.subtract(r, p, dtype=float)
    cross = np.cross(np.append(u, 0.0), np.append(v, 0.0)) if len(u) == 2 else np.cross(u, v)
    return math.atan2(np.linalg.norm(cross), np.dot(u, v))


def planar_obs(radar, A=(0.0, 0.0), B=(4.0, 0.0)):
    return math.dist(radar, A), math.dist(radar, B), angle_at(radar, A, B)


def spatial_obs(radar, P1, P2, P3):
    d = [math.dist(radar, P) for P in (P1, P2, P3)]
    g = [angle_at(radar, P1, P2), angle_at(radar, P1, P3), angle_at(radar, P2, P3)]
    return d, g


def triple_volume(a, b, c, d):
    m = np.array([np.subtract(x, a, dtype=float) for x in (b, c, d)])
    return abs(np.linalg.det(m)) / 6.0


@pytest.fixture
def rng():
    return np.random.default_rng(20231101)


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS.append((name, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
