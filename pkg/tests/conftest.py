import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sectionlab.geometry import Ball, Ellipsoid, Polytope, cube

settings.register_profile(
    "sectionlab", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("sectionlab")


def random_rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def random_convex_body(rng, n):
    """A ball, ellipsoid or polytope containing B(0, 0.5) and inside B(0, 2)."""
    kind = rng.integers(3)
    if kind == 0:
        radius = rng.uniform(0.8, 1.4)
        c = rng.normal(size=n)
        c *= rng.uniform(0, 0.25) / np.linalg.norm(c)
        return Ball(c, radius)
    if kind == 1:
        axes = rng.uniform(0.8, 1.4, n)
        c = rng.normal(size=n)
        c *= rng.uniform(0, 0.25) / np.linalg.norm(c)
        return Ellipsoid(c, axes, random_rotation(rng, n))
    m = int(rng.integers(2 * n + 2, 4 * n + 6))
    normals = rng.normal(size=(m, n))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    normals = np.vstack([normals, np.eye(n), -np.eye(n)])
    offsets = rng.uniform(0.6, 1.2, len(normals))
    return Polytope(normals, offsets)


def random_directions(rng, n, count):
    d = rng.normal(size=(count, n))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_ball3():
    return Ball(np.zeros(3), 1.0)


@pytest.fixture
def cube3():
    return cube(3)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
