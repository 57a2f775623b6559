import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sectionlab.errors import IllConditioned, PoleError, RangeError, SmoothnessError
from sectionlab.fractional import (
    check_order,
    frac_derivative,
    frac_section,
    frac_section_fourier,
    integer_limit_check,
    taylor_coefficients,
)
from sectionlab.geometry import Ball, Ellipsoid, cube, mollify

E1 = np.array([1.0, 0, 0])

# frozen from a 30-digit mpmath evaluation of the defining integrals; for the
# ball section pi (1 - t^2) the p = 1.5 value has the closed form -2 sqrt(pi)
ORACLE_BALL = {0.3: 2.84732958927566904, 0.5: 2.36327180120735470, 1.5: -3.54490770181103205}
ORACLE_SHIFTED = {  # ball((0.2, 0, 0), 1), xi = e1 and -e1
    0.5: (2.95928438221248602, 1.55330073004455713),
    1.5: (-2.37799637856360652, -4.53046046262996496),
}


def ball_section(t):
    t = np.asarray(t, dtype=float)
    return np.pi * np.maximum(1 - t * t, 0.0)


# -- orders ------------------------------------------------------------------------
def test_order_bookkeeping():
    assert check_order(-0.5) == 0
    assert check_order(0.5) == 1
    assert check_order(1.5) == 2
    with pytest.raises(PoleError):
        check_order(1.0)
    with pytest.raises(PoleError):
        check_order(2.0 + 1e-8)
    with pytest.raises(RangeError):
        check_order(-1.0)
    with pytest.warns(IllConditioned):
        check_order(1.0 + 5e-4)


def test_taylor_coefficients_of_exp():
    c = taylor_coefficients(np.exp, 0.5)[0]
    fact = np.cumprod(np.r_[1.0, np.arange(1, len(c))])
    # the low orders feed the subtracted Taylor polynomial and must be tight
    np.testing.assert_allclose(c[:4], 1.0 / fact[:4], rtol=1e-11)
    np.testing.assert_allclose(c[:8], 1.0 / fact[:8], rtol=1e-6)


# -- direct definition ---------------------------------------------------------------
@pytest.mark.parametrize("p", [-0.5, 0.3, 0.5, 1.5, 2.5])
def test_exponential_is_fixed(p):
    # the oracle gives 1 to 17 digits for p = -0.5, 0.3, 0.5
    assert frac_derivative(np.exp, p) == pytest.approx(1.0, rel=1e-11)


@pytest.mark.parametrize("p", [0.3, 0.5, 1.5])
def test_ball_section_against_oracle(p):
    assert frac_derivative(ball_section, p, support=1.0) == pytest.approx(ORACLE_BALL[p], rel=1e-11)


@pytest.mark.parametrize("split", [0.3, 0.7, 1.0, 2.5])
def test_split_point_independence(split):
    a = frac_derivative(ball_section, 0.5, support=1.0, split=split)
    b = frac_derivative(np.exp, 1.5, split=split)
    assert a == pytest.approx(ORACLE_BALL[0.5], rel=1e-11)
    assert b == pytest.approx(1.0, rel=1e-11)


@given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([-0.4, 0.3, 0.5, 1.5]))
def test_linearity(a, b, p):
    h1 = np.exp
    h2 = ball_section
    both = frac_derivative(lambda t: a * h1(t) + b * h2(t), p, support=None if a else 1.0)
    sep = a * frac_derivative(h1, p) + b * frac_derivative(h2, p, support=1.0)
    assert both == pytest.approx(sep, abs=1e-10 * (1 + abs(a) + abs(b)))


def test_even_function_uses_even_part():
    h = lambda t: np.exp(-np.asarray(t) ** 2)
    even = lambda t: 0.5 * (h(t) + h(-np.asarray(t)))
    res = frac_derivative(h, 1.5, details=True)
    assert abs(res.terms["taylor"][0, 1]) < 1e-12
    assert frac_derivative(even, 1.5) == pytest.approx(res.value, rel=1e-12)


def test_supplied_derivatives_match_fitted_ones():
    fitted = frac_derivative(np.exp, 1.5)
    given_ = frac_derivative(np.exp, 1.5, derivatives=[1.0, 1.0])
    assert given_ == pytest.approx(fitted, rel=1e-12)


def test_batch_evaluation():
    h = lambda t: np.vstack([np.exp(t), 2 * np.exp(t)])
    np.testing.assert_allclose(frac_derivative(h, 0.5, support=None if False else 30.0), [1.0, 2.0], rtol=1e-10)


# -- integer limits ----------------------------------------------------------------------
def test_integer_limit_exponential():
    rec = integer_limit_check(np.exp, 1)
    assert rec.target == pytest.approx(1.0, rel=1e-12)
    assert rec.final_gap < 1e-3
    assert rec.gaps[-1] <= rec.gaps[0]


def test_integer_limit_even_function_first_derivative():
    rec = integer_limit_check(lambda t: np.exp(-np.asarray(t) ** 2), 1, side=-1)
    assert abs(rec.target) < 1e-12
    assert rec.final_gap < 1e-3


def test_integer_limit_ball_second_derivative():
    rec = integer_limit_check(ball_section, 2, support=1.0, target=-2 * np.pi)
    assert rec.final_gap < 1e-3
    assert rec.monotone


# -- section functions ---------------------------------------------------------------------
def test_symmetric_body_is_even_in_direction():
    E = Ellipsoid(np.zeros(3), [1.0, 1.2, 0.8])
    xi = np.array([[0.6, 0.0, 0.8], [-0.6, 0.0, -0.8]])
    a, b = frac_section(E, xi, 0.5)
    assert a == pytest.approx(b, rel=1e-12)


def test_ball_is_direction_independent():
    dirs = np.array([[1.0, 0, 0], [0, 0.6, 0.8], [0, 0, -1.0]])
    vals = frac_section(Ball.centered(3), dirs, 0.5)
    np.testing.assert_allclose(vals, ORACLE_BALL[0.5], rtol=1e-11)


@pytest.mark.parametrize("p", [0.5, 1.5])
def test_shifted_ball_against_oracle(p):
    vals = frac_section(Ball(np.array([0.2, 0, 0]), 1.0), np.array([E1, -E1]), p)
    np.testing.assert_allclose(vals, ORACLE_SHIFTED[p], atol=1e-6)
    assert abs(vals[0] - vals[1]) > 0.1


def test_section_requires_smoothness_and_range():
    with pytest.raises(SmoothnessError):
        frac_section(cube(3), E1, 0.5)
    with pytest.raises(RangeError):
        frac_section(Ball.centered(3), E1, 2.5)
    with pytest.raises(PoleError):
        frac_section(Ball.centered(3), E1, 1.0)


def test_mollified_cube_is_accepted():
    K = mollify(cube(3), 0.1, eta_order=8)
    val = frac_section(K, np.array([0.0, 0.6, 0.8]), 0.5)
    assert np.isfinite(val)


# -- Fourier route ----------------------------------------------------------------------------
def test_symmetric_body_has_no_odd_part():
    res = frac_section_fourier(Ellipsoid(np.zeros(3), [1.0, 1.2, 0.8]), np.array([0.6, 0.0, 0.8]), 0.5)
    assert abs(res.odd_part) < 1e-12
    assert res.value == pytest.approx(res.even_part, rel=1e-12)


@pytest.mark.parametrize("p", [0.3, 0.5, 1.5])
@pytest.mark.parametrize("shift", [0.0, 0.1])
def test_routes_agree(p, shift):
    K = Ball(np.array([shift, 0, 0]), 1.0)
    dirs = np.array([[1.0, 0, 0], [0.0, 0.6, 0.8], [-0.6, 0.0, 0.8]])
    direct = frac_section(K, dirs, p)
    fourier = frac_section_fourier(K, dirs, p, max_degree=16)
    for d, f in zip(direct, fourier):
        assert f.value == pytest.approx(d, rel=5e-2)
        assert not f.flagged


def test_routes_agree_on_shifted_ellipsoid():
    K = Ellipsoid(np.array([0.1, -0.05, 0.0]), [1.0, 1.2, 0.9])
    dirs = np.array([[1.0, 0, 0], [0.0, 0.6, 0.8]])
    direct = frac_section(K, dirs, 0.5)
    fourier = frac_section_fourier(K, dirs, 0.5, max_degree=20)
    np.testing.assert_allclose([f.value for f in fourier], direct, rtol=1e-3)


def test_negative_order_routes_agree():
    K = Ball(np.array([0.1, 0, 0]), 1.0)
    d = frac_section(K, E1, -0.5)
    f = frac_section_fourier(K, E1, -0.5)
    assert f.value == pytest.approx(d, rel=1e-6)


def test_fourier_range():
    with pytest.raises(RangeError):
        frac_section_fourier(Ball.centered(3), E1, 2.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditioned)
        with pytest.raises(PoleError):
            frac_section_fourier(Ball.centered(3), E1, 1.0)
