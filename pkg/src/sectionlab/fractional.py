"""Fractional derivatives at zero, directly and through the Fourier formula.

For -1 < p < m, p not an integer, h m-smooth near 0 and any split point
c > 0 (default 1),

    h^(p)(0) = 1/Gamma(-p) * [ int_0^c t^(-1-p) (h(-t) - T_m(t)) dt
                              + int_c^inf t^(-1-p) h(-t) dt
                              + sum_{k<m} (-1)^k h^(k)(0) c^(k-p) / (k! (k-p)) ]

with T_m(t) = sum_{k<m} (-1)^k h^(k)(0) t^k / k!. Near zero the integrand is
singular, so h is replaced on [0, tau] by its Taylor series (coefficients
from a Chebyshev interpolant on [-tau, tau]) and integrated term by term;
the rest uses composite Gauss-Legendre panels graded toward the end of
the support.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev
from scipy.integrate import quad as scalar_quad
from scipy.special import rgamma, roots_legendre

from .errors import IllConditioned, PoleError, RangeError, SmoothnessError
from .geometry.bodies import StarBody
from .geometry.frames import as_directions
from .geometry.quadrature import sphere_grid
from .harmonics import expand, fourier_restriction
from .sections import section_batch

POLE_TOL = 1e-6
WARN_TOL = 1e-3
TAYLOR_DEGREE = 16
PANEL_NODES = 20
UNIFORM_PANELS = 8
GRADED_LEVELS = 24
IMAG_RESIDUAL_TOL = 1e-3


def check_order(p):
    """Raise PoleError on integers, warn near them; return the smoothness order m."""
    p = float(p)
    if p <= -1.0:
        raise RangeError(f"fractional order must exceed -1, got {p}")
    dist = abs(p - round(p))
    if dist < POLE_TOL:
        raise PoleError(f"p = {p} is within {POLE_TOL} of an integer (pole of Gamma(-p))")
    if dist < WARN_TOL:
        warnings.warn(f"p = {p} is close to an integer; result is ill-conditioned", IllConditioned, stacklevel=3)
    return 0 if p < 0 else int(np.floor(p)) + 1


def taylor_coefficients(h, radius, degree=TAYLOR_DEGREE):
    """h^(k)(0)/k! for k <= degree from a Chebyshev interpolant on [-radius, radius].

    ``h`` maps an array of t to values of the same shape, or to (B, T) for a
    batch of functions. Returns an array (B, degree+1).
    """
    x = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))  # Chebyshev points
    vals = np.atleast_2d(h(radius * x))
    V = chebyshev.chebvander(x, degree)
    cheb = np.linalg.solve(V, vals.T)  # (degree+1, B)
    power = np.array([chebyshev.cheb2poly(c) for c in cheb.T])  # coefficients in s = t/radius
    return power / radius ** np.arange(degree + 1)


def _graded_panels(a, b):
    """Breakpoints on [a, b]: uniform panels, the last one split geometrically toward b."""
    uniform = np.linspace(a, b, UNIFORM_PANELS + 1)
    last = uniform[-2]
    graded = b - (b - last) * 0.5 ** np.arange(1, GRADED_LEVELS + 1)
    return np.concatenate([uniform[:-1], graded, [b]])


def _panel_rule(a, b):
    x, w = roots_legendre(PANEL_NODES)
    edges = _graded_panels(a, b)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
    weights = 0.5 * (hi - lo) * w
    return nodes.ravel(), weights.ravel()


@dataclass
class FractionalResult:
    value: np.ndarray
    p: float
    m: int
    terms: dict = field(default_factory=dict)


def frac_derivative(
    h, p, support=None, taylor_radius=0.5, derivatives=None, degree=TAYLOR_DEGREE, split=1.0, details=False
):
    """Fractional derivative h^(p)(0) of order -1 < p, p not an integer.

    Parameters
    ----------
    h : callable
        Vectorised in t; may return (B, T) for a batch of functions.
    p : float
    support : float or None
        h(-t) = 0 for t >= support. None means unbounded support (tail by
        adaptive quadrature; only for a single function).
    taylor_radius : float
        h must be smooth on [-taylor_radius, taylor_radius].
    derivatives : sequence, optional
        Classical derivatives h^(k)(0), k < m, overriding the fitted ones.
    split : float
        Point separating the Taylor-subtracted integral from the tail; the
        value does not depend on it.
    """
    m = check_order(p)
    tau = float(taylor_radius)
    c = float(split)
    if c <= 0:
        raise RangeError("split point must be positive")
    tau = min(tau, 0.5 * c)
    if support is not None:
        tau = min(tau, 0.5 * float(support))
    coeffs = taylor_coefficients(h, tau, max(degree, m))
    B = len(coeffs)
    if derivatives is not None:
        fact = np.cumprod(np.concatenate([[1.0], np.arange(1, m)]))[:m]
        coeffs[:, :m] = np.asarray(derivatives, dtype=float)[:m] / fact
    k = np.arange(coeffs.shape[1])
    sign = (-1.0) ** k
    low = k < m

    # int_0^tau of the Taylor-subtracted integrand, term by term
    near = (sign * coeffs * tau ** (k - p) / (k - p))[:, ~low].sum(axis=1)
    # subtracted Taylor polynomial integrated over [tau, c]
    poly = (sign * coeffs * (c ** (k - p) - tau ** (k - p)) / (k - p))[:, low].sum(axis=1)
    correction = (sign * coeffs * c ** (k - p) / (k - p))[:, low].sum(axis=1)

    def integral(a, b):
        if b <= a:
            return np.zeros(B)
        t, w = _panel_rule(a, b)
        vals = np.atleast_2d(h(-t))
        return vals @ (w * t ** (-1.0 - p))

    if support is None:
        if B != 1:
            raise ValueError("unbounded support needs a single function")
        mid = integral(tau, c)
        tail_val, _ = scalar_quad(
            lambda t: t ** (-1.0 - p) * float(np.atleast_1d(h(np.array([-t])))[0]),
            c,
            np.inf,
            limit=200,
            epsabs=1e-14,
            epsrel=1e-13,
        )
        tail = np.array([tail_val])
    else:
        b = float(support)
        mid = integral(tau, min(b, c))
        tail = integral(c, b)

    first = near + mid - poly
    scale = rgamma(-p)
    value = scale * (first + tail + correction)
    if not details:
        return value if B > 1 else float(value[0])
    terms = {"head": scale * first, "tail": scale * tail, "correction": scale * correction, "taylor": coeffs}
    return FractionalResult(value if B > 1 else float(value[0]), float(p), m, terms)


def _require_smooth(K):
    if K.smoothness in ("polytope", "C0"):
        raise SmoothnessError("section functions of this body are not smooth; mollify first")


def frac_section(K: StarBody, xi, p, quad_sub=None, taylor_radius=None):
    """A^(p)_{K,xi}(0) by the direct definition for one direction or a batch."""
    _require_smooth(K)
    n = K.dim
    if not -1.0 < p < n - 1:
        raise RangeError(f"need -1 < p < n-1, got p={p}")
    xi = as_directions(xi, n)
    rows = np.atleast_2d(xi)
    h_plus = np.asarray(K._support(rows))
    h_minus = np.asarray(K._support(-rows))
    eta = taylor_radius if taylor_radius is not None else 0.25 * K.inner_radius
    values = np.empty(len(rows))
    for i, row in enumerate(rows):

        def A(t, row=row, hp=h_plus[i], hm=h_minus[i]):
            t = np.atleast_1d(t)
            return section_batch(K, np.broadcast_to(row, (len(t), n)), t, quad_sub, hp, hm)

        values[i] = frac_derivative(A, p, support=float(h_minus[i]), taylor_radius=eta)
    return values if xi.ndim > 1 else float(values[0])


@dataclass
class FourierFractional:
    value: float
    imag_residual: float
    flagged: bool
    even_part: float
    odd_part: float


def frac_section_fourier(K: StarBody, xi, p, max_degree=16, quad=None):
    """A^(p)_{K,xi}(0) from the harmonic expansions of rho^(n-1-p)(x) +- rho^(n-1-p)(-x).

    The even combination is weighted by cos(p pi/2), the odd one by
    i sin(p pi/2), both divided by 2 pi (n-1-p). Returns a FourierFractional
    (or a list for a batch of directions) with the imaginary residual.
    """
    n = K.dim
    if not 0.0 < 1.0 + p < n:
        raise RangeError(f"need 0 < 1+p < n, got p={p}")
    check_order(p)
    xi = as_directions(xi, n)
    if quad is None:
        quad = sphere_grid(n, 2 * max_degree + 3)
    rho = K.radial_on(quad)
    rho_neg = np.asarray(K._radial(-quad.nodes))
    a = rho ** (n - 1 - p)
    b = rho_neg ** (n - 1 - p)
    even = fourier_restriction(expand(a + b, quad, max_degree), 1.0 + p)
    odd = fourier_restriction(expand(a - b, quad, max_degree), 1.0 + p)
    rows = np.atleast_2d(xi)
    fe = np.atleast_1d(even.synthesize(rows))
    fo = np.atleast_1d(odd.synthesize(rows))
    denom = 2.0 * np.pi * (n - 1 - p)
    e_part = np.cos(0.5 * np.pi * p) * fe / denom
    o_part = 1j * np.sin(0.5 * np.pi * p) * fo / denom
    total = e_part + o_part
    out = []
    for i in range(len(rows)):
        val = float(total[i].real)
        resid = float(abs(total[i].imag))
        out.append(
            FourierFractional(val, resid, resid > IMAG_RESIDUAL_TOL * abs(val), float(e_part[i].real), float(o_part[i].real))
        )
    return out if xi.ndim > 1 else out[0]


@dataclass
class IntegerLimitRecord:
    k: int
    target: float
    orders: np.ndarray
    values: np.ndarray
    gaps: np.ndarray

    @property
    def final_gap(self):
        return float(self.gaps[-1])

    @property
    def monotone(self):
        d = np.diff(self.gaps)
        return bool(np.all(d <= 1e-12 + 1e-9 * self.gaps[:-1]))


def integer_limit_check(h, k, approach=None, support=None, taylor_radius=0.5, target=None, side=1):
    """|h^(p)(0) - h^(k)(0)| along p = k + side * 10^-j, j = 1..5.

    ``target`` defaults to the classical derivative taken from the Taylor fit.
    """
    if approach is None:
        approach = k + side * 10.0 ** -np.arange(1, 6)
    approach = np.asarray(approach, dtype=float)
    if target is None:
        coeffs = taylor_coefficients(h, taylor_radius if support is None else min(taylor_radius, 0.5 * support))
        target = float(coeffs[0, k] * np.prod(np.arange(1, k + 1)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditioned)
        values = np.array([frac_derivative(h, p, support=support, taylor_radius=taylor_radius) for p in approach])
    values = np.array([float(np.atleast_1d(v)[0]) for v in values])
    return IntegerLimitRecord(int(k), float(target), approach, values, np.abs(values - target))
