import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_convex_body, random_directions
from sectionlab.errors import DimError, InvalidBody, RangeError
from sectionlab.geometry import (
    Ball,
    Ellipsoid,
    Polytope,
    RadialSeries,
    TabulatedStarBody,
    as_directions,
    ball_volume,
    body_from_spec,
    convexity_certificate,
    cube,
    hausdorff_and_l2,
    householder_frame,
    load_body,
    mollify,
    radial,
    radial_metric,
    reflect,
    save_body,
    sphere_area,
    sphere_grid,
    support,
    vitale_check,
)


# -- constants and quadrature ------------------------------------------------------
def test_ball_volume_and_sphere_area():
    assert ball_volume(2) == pytest.approx(np.pi, rel=1e-15)
    assert ball_volume(3) == pytest.approx(4 * np.pi / 3, rel=1e-15)
    assert sphere_area(3) == pytest.approx(4 * np.pi, rel=1e-15)
    assert sphere_area(4) == pytest.approx(2 * np.pi**2, rel=1e-15)


def test_circle_grid_is_uniform():
    q = sphere_grid(2, 8)
    assert len(q) == 8
    np.testing.assert_allclose(q.weights, 2 * np.pi / 8, rtol=1e-15)
    angles = np.mod(np.arctan2(q.nodes[:, 1], q.nodes[:, 0]), 2 * np.pi)
    np.testing.assert_allclose(np.sort(angles), 2 * np.pi * np.arange(8) / 8, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weights_sum_to_sphere_area(n):
    assert sphere_grid(n, 16).weights.sum() == pytest.approx(sphere_area(n), rel=1e-12)


def test_second_moment_on_s2():
    q = sphere_grid(3, 16)
    assert q.integrate(q.nodes[:, 0] ** 2) == pytest.approx(4 * np.pi / 3, rel=1e-13)


@pytest.mark.parametrize("n", [3, 4])
def test_monomials_integrated_exactly(n):
    # int x1^2a x2^2b over S^{n-1} = 2 Gamma(a+1/2) Gamma(b+1/2) Gamma(1/2)^(n-2) / Gamma(a+b+n/2)
    from scipy.special import gamma

    q = sphere_grid(n, 8)
    for a, b in [(0, 0), (1, 2), (3, 1), (4, 3)]:
        exact = 2 * gamma(a + 0.5) * gamma(b + 0.5) * gamma(0.5) ** (n - 2) / gamma(a + b + n / 2)
        got = q.integrate(q.nodes[:, 0] ** (2 * a) * q.nodes[:, 1] ** (2 * b))
        assert got == pytest.approx(exact, rel=1e-12)
    odd = q.integrate(q.nodes[:, 0] ** 3 * q.nodes[:, 1])
    assert abs(odd) < 1e-13


def test_grid_rejects_small_order():
    with pytest.raises(RangeError):
        sphere_grid(3, 2)
    with pytest.raises(RangeError):
        sphere_grid(1, 8)


def test_directions_are_validated():
    with pytest.raises(RangeError):
        as_directions([1.0, 1.0, 0.0], 3)
    with pytest.raises(DimError):
        as_directions([1.0, 0.0], 3)


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 0.1))
def test_householder_frame_is_orthonormal(v):
    xi = np.array(v) / np.linalg.norm(v)
    F = householder_frame(xi)
    M = np.column_stack([F, xi])
    np.testing.assert_allclose(M.T @ M, np.eye(3), atol=1e-13)


# -- radial and support ----------------------------------------------------------------
def test_ball_radial_is_one(rng):
    B = Ball.centered(3)
    np.testing.assert_allclose(B.radial(random_directions(rng, 3, 50)), 1.0, rtol=1e-15)


def test_ellipse_axis_radial():
    assert radial(Ellipsoid(np.zeros(2), [1.0, 2.0]), [1.0, 0.0]) == pytest.approx(1.0, rel=1e-15)


def test_cube_diagonal_radial():
    # frozen from a ray march with step 1e-6: 1.73205
    d = np.ones(3) / np.sqrt(3)
    assert radial(cube(3), d) == pytest.approx(1.73205, abs=2e-6)
    assert radial(cube(3), d) == pytest.approx(np.sqrt(3), rel=1e-14)


def test_polytope_without_origin_inside_is_rejected():
    with pytest.raises(InvalidBody):
        Polytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [1.0, -0.1, 1.0, 1.0])


def test_unbounded_polytope_is_rejected():
    with pytest.raises(InvalidBody):
        Polytope([[1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [1.0, 1.0, 1.0])


def test_supports():
    c = np.array([0.1, -0.2, 0.05])
    B = Ball(c, 0.7)
    xi = np.array([0.6, 0.0, 0.8])
    assert support(B, xi) == pytest.approx(c @ xi + 0.7, rel=1e-15)
    assert support(cube(3), np.ones(3) / np.sqrt(3)) == pytest.approx(np.sqrt(3), rel=1e-14)
    assert support(Ellipsoid(np.zeros(3), [1, 2, 3]), [0, 1, 0]) == pytest.approx(2.0, rel=1e-15)


def test_polytope_lp_support_matches_vertices(rng):
    P = random_convex_body(np.random.default_rng(3), 3)
    while not isinstance(P, Polytope):
        P = random_convex_body(rng, 3)
    dirs = random_directions(rng, 3, 20)
    np.testing.assert_allclose(P._lp_support(dirs)[0], P._support(dirs), rtol=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_radial_below_support(n, rng):
    q = sphere_grid(n, 17)
    for _ in range(10):
        K = random_convex_body(rng, n)
        assert np.all(K.radial_on(q) <= K.support_on(q) * (1 + 1e-12))


def test_ball_radial_equals_support():
    q = sphere_grid(3, 9)
    B = Ball.centered(3, 1.3)
    np.testing.assert_allclose(B.radial_on(q), B.support_on(q), rtol=1e-15)


def test_certified_radii_bracket_grid_values(rng):
    q = sphere_grid(3, 25)
    for _ in range(8):
        K = random_convex_body(rng, 3)
        rho = K.radial_on(q)
        assert K.inner_radius <= rho.min() * (1 + 1e-10)
        assert K.outer_radius >= rho.max() * (1 - 1e-10)


# -- reflection ------------------------------------------------------------------------
def test_reflected_ball_is_ball():
    c = np.array([0.3, -0.1, 0.2])
    R = reflect(Ball(c, 1.0))
    assert isinstance(R, Ball)
    np.testing.assert_array_equal(R.center, -c)


def test_reflection_of_symmetric_ellipsoid(rng):
    E = Ellipsoid(np.zeros(3), [1.0, 1.3, 0.7])
    dirs = random_directions(rng, 3, 40)
    np.testing.assert_allclose(reflect(E).radial(dirs), E.radial(dirs), rtol=1e-15)


def test_shifted_cube_reflection_swaps_axis():
    K = cube(3, center=[0.1, 0, 0])
    e1 = np.array([1.0, 0, 0])
    assert reflect(K).radial(e1) == pytest.approx(K.radial(-e1), rel=1e-15)
    assert reflect(K).radial(-e1) == pytest.approx(K.radial(e1), rel=1e-15)
    assert K.radial(e1) == pytest.approx(1.1) and K.radial(-e1) == pytest.approx(0.9)


@given(st.integers(0, 10_000))
def test_double_reflection_is_identity(seed):
    rng = np.random.default_rng(seed)
    K = random_convex_body(rng, 3)
    dirs = random_directions(rng, 3, 20)
    np.testing.assert_array_equal(reflect(reflect(K)).radial(dirs), K.radial(dirs))


# -- metrics ---------------------------------------------------------------------------
def test_radial_metric_examples():
    q = sphere_grid(3, 17)
    assert radial_metric(Ball.centered(3), Ball.centered(3, 1.1), q).value == pytest.approx(0.1, rel=1e-14)
    K = Ball(np.array([0.2, 0, 0]), 1.0)
    assert radial_metric(K, K, q).value == 0.0
    # dense evaluation of both radial functions gives the analytic 2s
    assert radial_metric(K, reflect(K), sphere_grid(3, 33)).value == pytest.approx(0.4, rel=1e-12)


def test_radial_metric_dimension_mismatch():
    with pytest.raises(DimError):
        radial_metric(Ball.centered(2), Ball.centered(3), sphere_grid(3, 8))


def test_radial_metric_refinement_converges():
    K = Ellipsoid(np.array([0.1, 0.05, 0]), [1.0, 1.2, 0.9])
    res = radial_metric(K, reflect(K), sphere_grid(3, 8), refine=True)
    assert res.converged
    assert res.grid_order > 8


@given(st.integers(0, 10_000))
def test_radial_metric_is_a_metric(seed):
    rng = np.random.default_rng(seed)
    q = sphere_grid(3, 9)
    K, L, M = (random_convex_body(rng, 3) for _ in range(3))
    assert radial_metric(K, L, q).value == radial_metric(L, K, q).value
    assert radial_metric(K, M, q).value <= radial_metric(K, L, q).value + radial_metric(L, M, q).value + 1e-12


def test_hausdorff_and_l2_concentric_disks():
    d_inf, d_2 = hausdorff_and_l2(Ball.centered(2), Ball.centered(2, 1.1), sphere_grid(2, 64))
    assert d_inf == pytest.approx(0.1, rel=1e-13)
    assert d_2 == pytest.approx(np.sqrt(2 * np.pi) * 0.1, rel=1e-13)
    assert hausdorff_and_l2(cube(3), cube(3), sphere_grid(3, 8)) == (0.0, 0.0)


def test_hausdorff_and_l2_cube_vs_ball():
    # frozen from Monte-Carlo support sampling at 1e6 directions: 0.7320506, 1.852353
    d_inf, d_2 = hausdorff_and_l2(cube(3), Ball.centered(3), sphere_grid(3, 64))
    assert d_inf == pytest.approx(0.7320506, abs=2e-3)
    assert d_2 == pytest.approx(1.852353, rel=5e-3)


def test_vitale_concentric_balls_saturate_upper_bound():
    lower, middle, upper, holds = vitale_check(Ball.centered(2), Ball.centered(2, 1.1), sphere_grid(2, 64))
    assert holds
    assert middle == pytest.approx(upper, rel=1e-12)
    assert lower < middle


def test_vitale_identical_bodies():
    assert tuple(vitale_check(cube(3), cube(3), sphere_grid(3, 8))) == (0.0, 0.0, 0.0, True)


def test_vitale_shifted_ellipsoids(rng):
    q = sphere_grid(3, 17)
    for mode in ("direct", "polar"):
        K = Ellipsoid(np.array([0.1, 0, 0.05]), [1.0, 1.2, 0.8])
        L = Ellipsoid(np.array([-0.05, 0.1, 0]), [0.9, 1.1, 1.0])
        res = vitale_check(K, L, q, mode=mode)
        assert res.holds
        assert res.lower <= res.middle <= res.upper


@given(st.integers(0, 10_000))
def test_vitale_random_pairs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    q = sphere_grid(n, 33 if n == 2 else 9)
    assert vitale_check(random_convex_body(rng, n), random_convex_body(rng, n), q).holds


# -- mollifier -------------------------------------------------------------------------
def test_mollified_ball_is_a_centred_ball(rng):
    Kd = mollify(Ball.centered(3), 0.1)
    rho = Kd.radial(random_directions(rng, 3, 30))
    np.testing.assert_allclose(rho, rho[0], rtol=1e-10)
    assert abs(rho[0] - 1.0) < 5e-3


def test_mollified_cube_is_close_to_cube():
    K = cube(3)
    assert radial_metric(K, mollify(K, 0.05), sphere_grid(3, 9)).value <= 0.2


@pytest.mark.parametrize("delta", [0.02, 0.05, 0.1])
def test_mollifier_sandwich(delta):
    q = sphere_grid(3, 9)
    for K in (cube(3), Ball(np.array([0.2, 0, 0]), 1.0)):
        rho = mollify(K, delta).radial_on(q)
        assert np.all(rho >= K.inner_radius / (1 + delta))
        assert np.all(rho <= K.outer_radius / (1 - delta))


def test_mollifier_rejects_bad_delta():
    with pytest.raises(RangeError):
        mollify(cube(3), 1.5)


def test_quadrature_doubling_is_stable_for_smooth_bodies():
    K = Ellipsoid(np.array([0.1, 0, 0]), [1.0, 1.2, 0.8])
    a = sphere_grid(3, 16).integrate(K.radial_on(sphere_grid(3, 16)))
    b = sphere_grid(3, 32).integrate(K.radial_on(sphere_grid(3, 32)))
    assert abs(a - b) < 1e-6 * abs(b)


# -- radial series and tabulated bodies -----------------------------------------------------
def test_radial_series_convexity_certificate():
    smooth = RadialSeries(3, 1.0, [(2, 0, 0.05)])
    assert smooth.convex
    wobbly = RadialSeries(3, 1.0, [(6, 3, 0.9)])
    assert not wobbly.convex
    passed, excess = convexity_certificate(wobbly, chords=2000)
    assert not passed and excess > 0


def test_radial_series_must_stay_positive():
    with pytest.raises(InvalidBody):
        RadialSeries(3, 0.1, [(1, 0, 5.0)], certify=False)


def test_tabulated_body_is_exact_at_nodes():
    q = sphere_grid(3, 9)
    vals = 1.0 + 0.1 * q.nodes[:, 0]
    T = TabulatedStarBody(q, vals)
    np.testing.assert_array_equal(T.radial(q.nodes), vals)


# -- spec files ------------------------------------------------------------------------
@pytest.mark.parametrize(
    "spec",
    [
        {"type": "ball", "dim": 3, "parameters": {"center": [0.1, 0, 0], "radius": 1.2}},
        {"type": "ellipsoid", "dim": 3, "parameters": {"semi_axes": [1, 1.3, 0.7]}},
        {"type": "cube", "dim": 3, "parameters": {"half_width": 0.9}},
        {"type": "polytope", "dim": 2, "parameters": {"halfspaces": [[[1, 0], 1], [[-1, 0], 1], [[0, 1], 1], [[0, -1], 2]]}},
        {"type": "radial_series", "dim": 3, "parameters": {"base": 1.0, "coefficients": [[2, 1, 0.05]]}},
        {"type": "mollified", "dim": 3, "parameters": {"body": {"type": "cube", "dim": 3}, "delta": 0.05}},
        {"type": "reflect", "dim": 3, "parameters": {"body": {"type": "ball", "dim": 3, "parameters": {"center": [0.2, 0, 0]}}}},
    ],
)
def test_spec_round_trip(spec, tmp_path, rng):
    K = body_from_spec(spec)
    path = tmp_path / "body.json"
    save_body(K, path)
    K2 = load_body(path)
    dirs = random_directions(rng, K.dim, 10)
    np.testing.assert_allclose(K2.radial(dirs), K.radial(dirs), rtol=1e-13)


@pytest.mark.parametrize(
    "spec",
    [
        {"type": "teapot", "dim": 3, "parameters": {}},
        {"type": "ellipsoid", "dim": 3, "parameters": {}},
        {"type": "ball", "dim": 2, "parameters": {"center": [0, 0, 0]}},
        {"type": "ball", "dim": 3, "parameters": {"center": [2, 0, 0]}},
        [1, 2, 3],
    ],
)
def test_malformed_specs(spec):
    with pytest.raises(InvalidBody):
        body_from_spec(spec)


def test_unreadable_spec(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(InvalidBody):
        load_body(path)
    with pytest.raises(InvalidBody):
        load_body(tmp_path / "missing.json")
    json.loads(json.dumps({"ok": 1}))
