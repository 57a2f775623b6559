"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are collected in ``RESULTS`` and echoed in the terminal summary
(see conftest.py), so they show up even when output capture is on.
"""
import functools
import time

import numpy as np
import pytest

from conftest import random_convex_body, random_directions
from sectionlab.fractional import frac_section, frac_section_fourier, integer_limit_check
from sectionlab.geometry import Ball, Ellipsoid, cube, mollify, sphere_grid, vitale_check
from sectionlab.harmonics import apply_Ip, central_slope_harmonic, expand, lambda_eigenvalue
from sectionlab.sections import (
    averaged_section,
    averaged_section_derivative,
    central_slopes,
    lipschitz_audit,
    parallel_section,
    section_batch,
    section_profile,
)
from sectionlab.stability import (
    main1_constant_2d,
    shifted_disk,
    sweep_main1,
    sweep_main2,
    verify_main1,
)

RESULTS = []


def criterion(number, title):
    """Record a PASS/FAIL line for the wrapped test, then re-raise any failure."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs) or ""
            except BaseException as exc:
                first = str(exc).strip().splitlines()[0] if str(exc).strip() else type(exc).__name__
                RESULTS.append(f"criterion {number:2d} FAIL  {title}: {first}")
                raise
            RESULTS.append(f"criterion {number:2d} PASS  {title} ({time.perf_counter() - start:.1f}s) {detail}")

        return run

    return wrap


def check_runtime(start, limit):
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"runtime {elapsed:.1f}s exceeds {limit}s"
    return elapsed


@criterion(1, "ball sections")
def test_ball_sections():
    start = time.perf_counter()
    t = np.array([0.0, 0.3, -0.3, 0.6, -0.6])
    A = parallel_section(Ball.centered(3), np.array([0.0, 0, 1]), t, quad_sub=sphere_grid(2, 64))
    err = float(np.abs(A - np.pi * (1 - t * t)).max())
    check_runtime(start, 1.0)
    assert err < 1e-6, f"max error {err:.2e}"
    return f"max error {err:.1e}"


@criterion(2, "averaged-section routes and derivative identity")
def test_averaged_section_identity():
    start = time.perf_counter()
    q = sphere_grid(3, 24)
    E = Ellipsoid(np.zeros(3), [1.0, 1.2, 0.8])
    gaps = []
    for t in (0.0, 0.2, 0.4):
        a = averaged_section(E, t, q, "definition")
        b = averaged_section(E, t, q, "radial_formula")
        gaps.append(abs(a - b) / abs(b))
    h = 1e-4
    r = E.inner_radius
    fd_gaps = []
    for t in np.linspace(-r / 4, r / 4, 5):
        fd = (averaged_section(E, t + h, q) - averaged_section(E, t - h, q)) / (2 * h)
        fd_gaps.append(abs(averaged_section_derivative(E, t, q) - fd))
    check_runtime(start, 30.0)
    assert max(gaps) < 1e-4, f"route gap {max(gaps):.2e}"
    assert max(fd_gaps) < 1e-3, f"derivative gap {max(fd_gaps):.2e}"
    return f"route gap {max(gaps):.1e}, derivative gap {max(fd_gaps):.1e}"


@criterion(3, "Brunn concavity on random bodies")
def test_brunn_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = np.inf
    for i in range(20):
        n = 2 + i % 2
        K = random_convex_body(rng, n)
        for xi in random_directions(rng, n, 50):
            worst = min(worst, float(np.nanmin(section_profile(K, xi).concavity_residual)))
    check_runtime(start, 60.0)
    assert worst >= -1e-8, f"residual {worst:.2e}"
    return f"min residual {worst:.1e}"


@criterion(4, "Lipschitz bound with L(2)=8, L(3)=16 pi")
def test_lipschitz_bound():
    rng = np.random.default_rng(4)
    literal = {2: 8.0, 3: 16 * np.pi}
    violations, worst = 0, 0.0
    for i in range(20):
        n = 2 + i % 2
        K = random_convex_body(rng, n)
        audit = lipschitz_audit(K, sphere_grid(n, 33 if n == 2 else 9), samples=300, seed=i)
        bound = literal[n] * K.outer_radius ** (n - 1) / K.inner_radius
        violations += int(audit.max_ratio > bound) + int(not audit.holds)
        worst = max(worst, audit.max_ratio / bound)
    assert violations == 0, f"{violations} violations"
    return f"largest ratio / bound {worst:.3f}"


@criterion(5, "eigenvalue table and eigenfunction property")
def test_eigenvalues():
    assert lambda_eigenvalue(2, 1, 0) == pytest.approx(2 * np.pi, rel=1e-12)
    assert lambda_eigenvalue(3, 2, 2) == pytest.approx(-8 * np.pi, rel=1e-12)
    assert lambda_eigenvalue(3, 2, 1) == pytest.approx(2j * np.pi**2, rel=1e-12)
    rng = np.random.default_rng(5)
    n, p = 3, 1.5
    worst = 0.0
    dirs = random_directions(rng, n, 20)
    for m in range(7):
        q = sphere_grid(n, max(4, 2 * m + 3))
        exp = expand(np.zeros(len(q)), q, m)
        exp.blocks[m][:] = rng.normal(size=len(exp.blocks[m]))
        image = apply_Ip(exp, p)
        diff = image.synthesize(dirs) - lambda_eigenvalue(n, p, m) * exp.synthesize(dirs)
        worst = max(worst, float(np.abs(diff).max()))
    assert worst < 1e-8, f"eigenfunction residual {worst:.2e}"
    return f"eigenfunction residual {worst:.1e}"


@criterion(6, "harmonic vs finite-difference central slope")
def test_harmonic_slope():
    start = time.perf_counter()
    K = Ball(np.array([0.1, 0, 0]), 1.0)
    dirs = np.array([[1.0, 0, 0], [0.6, 0.8, 0], [0.0, 0.6, 0.8], [-0.48, 0.6, 0.64]])
    harm = central_slope_harmonic(K, dirs, sphere_grid(3, 32), max_degree=12)
    fd, _ = central_slopes(K, dirs)
    rel = np.abs(harm - fd) / np.maximum(np.abs(fd), 1e-8)
    rel = float(np.where(np.abs(fd) > 1e-8, rel, np.abs(harm - fd)).max())
    check_runtime(start, 60.0)
    assert rel < 1e-2, f"relative gap {rel:.2e}"
    return f"relative gap {rel:.1e}"


@criterion(7, "fractional routes and integer limits")
def test_fractional_routes():
    dirs = np.array([[1.0, 0, 0], [-1.0, 0, 0], [0.0, 0.6, 0.8]])
    worst = 0.0
    for K in (Ball.centered(3), Ball(np.array([0.2, 0, 0]), 1.0)):
        for p in (0.3, 0.5, 1.5):
            direct = frac_section(K, dirs, p)
            fourier = frac_section_fourier(K, dirs, p, max_degree=16)
            worst = max(worst, max(abs(f.value - d) / abs(d) for f, d in zip(fourier, direct)))
    assert worst < 5e-2, f"route gap {worst:.2e}"

    s = 0.2
    K = Ball(np.array([s, 0, 0]), 1.0)
    xi = np.array([1.0, 0, 0])

    def A(t):
        t = np.atleast_1d(t)
        return section_batch(K, np.broadcast_to(xi, (len(t), 3)), t)

    support = float(K.support(-xi))
    gaps = [
        integer_limit_check(A, 1, support=support, target=2 * np.pi * s).final_gap,
        integer_limit_check(A, 2, support=support, target=-2 * np.pi).final_gap,
        integer_limit_check(A, 1, support=support, target=2 * np.pi * s, side=-1).final_gap,
        integer_limit_check(np.exp, 1, target=1.0).final_gap,
    ]
    assert max(gaps) < 1e-3, f"integer-limit gap {max(gaps):.2e}"
    return f"route gap {worst:.1e}, integer-limit gap {max(gaps):.1e}"


@criterion(8, "explicit planar stability on shifted disks")
def test_planar_stability():
    q = sphere_grid(2, 65)
    parts = []
    for s in (0.01, 0.02, 0.05):
        rep = verify_main1(shifted_disk(s), q)
        r, R = 1 - s, 1 + s
        bound = main1_constant_2d(r) * R * np.sqrt(rep.epsilon)
        assert rep.distance == pytest.approx(2 * s, rel=1e-9)
        assert 2 * s <= bound, f"s={s}: 2s={2 * s} > {bound}"
        assert not rep.violated
        assert isinstance(rep.gate_met, bool) and np.isfinite(rep.gate)
        parts.append(f"s={s}: eps={rep.epsilon:.2e} gate={rep.gate:.2e} met={rep.gate_met}")
    return "; ".join(parts)


@criterion(9, "exponent consistency sweeps")
def test_exponent_sweeps():
    ball = sweep_main1("shifted-ball", np.geomspace(1e-3, 1e-1, 7), sphere_grid(3, 9))
    assert ball.fit.slope == pytest.approx(0.5, abs=0.05), f"shifted-ball slope {ball.fit.slope:.3f}"
    assert ball.fit.slope >= 1 / 8 and ball.consistent and not ball.violated
    dil = sweep_main2(np.geomspace(1e-3, 1e-1, 6), 0.5, sphere_grid(3, 35), sphere_grid(3, 5))
    assert dil.fit.slope == pytest.approx(1.0, abs=0.1), f"dilated slope {dil.fit.slope:.3f}"
    assert dil.fit.slope >= 2 / 4 and dil.consistent and not dil.violated
    return f"shifted-ball slope {ball.fit.slope:.4f}, dilated slope {dil.fit.slope:.4f}"


@criterion(10, "Vitale inequalities")
def test_vitale_suite():
    rng = np.random.default_rng(10)
    grids = {2: sphere_grid(2, 33), 3: sphere_grid(3, 9)}
    failures = 0
    for i in range(100):
        n = 2 + i % 2
        failures += int(not vitale_check(random_convex_body(rng, n), random_convex_body(rng, n), grids[n]).holds)
    assert failures == 0, f"{failures} failing pairs"
    res = vitale_check(Ball.centered(3), Ball.centered(3, 1.3), sphere_grid(3, 9))
    gap = abs(res.middle - res.upper)
    assert res.holds and gap < 1e-9, f"concentric gap {gap:.2e}"
    return f"concentric gap {gap:.1e}"


@criterion(11, "mollifier containment")
def test_mollifier_sandwich():
    q = sphere_grid(3, 9)
    slack = np.inf
    for delta in (0.02, 0.05, 0.1):
        for K in (cube(3), Ball(np.array([0.2, 0, 0]), 1.0)):
            rho = mollify(K, delta).radial_on(q)
            lo = K.inner_radius / (1 + delta)
            hi = K.outer_radius / (1 - delta)
            assert np.all(rho >= lo) and np.all(rho <= hi), f"delta={delta}, {K.kind}"
            slack = min(slack, float((rho - lo).min()), float((hi - rho).min()))
    return f"smallest slack {slack:.2e}"
