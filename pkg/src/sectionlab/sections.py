"""Parallel section functions, maximal sections, IK and CK, averaged sections.

A_{K,xi}(t) is the (n-1)-volume of K cut by H_t = xi-perp + t xi. It is
computed as (1/(n-1)) * integral over S^{n-2} of rho_{K cap H_t}^{n-1},
with the slice radial function measured from a centre inside the slice and
directions of xi-perp taken from the Householder frame of xi. For n = 2 the
section is the chord length; for polytopes in R^3 the slice is a polygon
and its area is exact.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import BoundaryError, DimError, SmoothnessError
from .geometry.bodies import Polytope, StarBody, TabulatedStarBody
from .geometry.frames import as_directions, check_orthogonal, householder_frame
from .geometry.quadrature import SphereQuadrature, default_subgrid, sphere_area
from .kernels import polygon_areas

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
MAX_TOL = 1e-10
PLATEAU_FLAT = 1e-12
PLATEAU_SCAN = 1e-4


# -- constants ---------------------------------------------------------------
def averaging_constant(n):
    """C~(n) = Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))."""
    return float(np.exp(gammaln(0.5 * n) - 0.5 * np.log(np.pi) - gammaln(0.5 * (n - 1))))


def lipschitz_constant(n):
    """L(n) = 8 (n-1) pi^((n-1)/2) / Gamma((n+1)/2)."""
    return float(8.0 * (n - 1) * np.exp(0.5 * (n - 1) * np.log(np.pi) - gammaln(0.5 * (n + 1))))


# -- slices ------------------------------------------------------------------
def _slab(K, xi, h_plus=None, h_minus=None):
    if h_plus is None:
        h_plus = np.asarray(K._support(xi))
    if h_minus is None:
        h_minus = np.asarray(K._support(-xi))
    return h_plus, h_minus


def slice_centers(K: StarBody, xi, t, h_plus=None, h_minus=None):
    """A point of K in H_t for each row (xi_i, t_i).

    t xi itself when it lies in K; otherwise the point of H_t on the segment
    from the origin to a support point of K in direction sign(t) xi, which
    lies in K by convexity.
    """
    xi = np.atleast_2d(xi)
    t = np.broadcast_to(np.asarray(t, dtype=float), (len(xi),)).copy()
    c = t[:, None] * xi
    outside = np.asarray(K.gauge(c)) >= 1.0
    if outside.any():
        h_plus, h_minus = _slab(K, xi, h_plus, h_minus)
        hp = np.broadcast_to(h_plus, t.shape)[outside]
        hm = np.broadcast_to(h_minus, t.shape)[outside]
        to = t[outside]
        x_up = K._support_point(xi[outside])
        x_dn = K._support_point(-xi[outside])
        up = to >= 0
        c[outside] = np.where(
            up[:, None],
            (to / hp)[:, None] * x_up,
            (-to / hm)[:, None] * x_dn,
        )
    return c


def slice_radial(K: StarBody, xi, t, theta):
    """Distance from the slice centre to the boundary of K in H_t along theta.

    The centre is t xi whenever t xi lies in K. Returns 0 outside the slab
    -h_K(-xi) < t < h_K(xi).
    """
    xi = as_directions(xi, K.dim)
    theta = np.asarray(theta, dtype=float)
    check_orthogonal(xi, theta)
    h_plus, h_minus = _slab(K, xi[None])
    if not -h_minus[0] < t < h_plus[0]:
        return 0.0
    c = slice_centers(K, xi[None], t, h_plus, h_minus)
    return float(K.ray_exit(c, theta[None])[0])


def _polytope_slice_areas(P: Polytope, xi, t):
    frames = householder_frame(xi)  # (B, 3, 2)
    proj = np.einsum("mi,bij->bmj", P.normals, frames)
    gamma = P.offsets[None, :] - t[:, None] * (xi @ P.normals.T)
    return polygon_areas(proj[..., 0], proj[..., 1], gamma)


def section_batch(K: StarBody, xi, t, quad_sub=None, h_plus=None, h_minus=None):
    """A_{K, xi_i}(t_i) for rows of xi (B, n) and t (B,) or scalar t."""
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n = K.dim
    if xi.shape[1] != n:
        raise DimError(f"directions must lie in R^{n}")
    t = np.broadcast_to(np.asarray(t, dtype=float), (len(xi),)).copy()
    h_plus, h_minus = _slab(K, xi, h_plus, h_minus)
    h_plus = np.broadcast_to(h_plus, t.shape)
    h_minus = np.broadcast_to(h_minus, t.shape)
    inside = (t < h_plus) & (t > -h_minus)
    out = np.zeros(len(xi))
    if not inside.any():
        return out
    xi_in, t_in = xi[inside], t[inside]

    if isinstance(K, Polytope) and n == 3:
        out[inside] = _polytope_slice_areas(K, xi_in, t_in)
        return out

    c = slice_centers(K, xi_in, t_in, h_plus[inside], h_minus[inside])
    frames = householder_frame(xi_in)
    if n == 2:
        theta = frames[:, :, 0]
        out[inside] = K.ray_exit(c, theta) + K.ray_exit(c, -theta)
        return out

    sub = quad_sub if quad_sub is not None else default_subgrid(n)
    if sub.dim != n - 1:
        raise DimError("slice quadrature must live on S^{n-2}")
    B, J = len(xi_in), len(sub)
    theta = np.einsum("bij,kj->bki", frames, sub.nodes).reshape(-1, n)
    r = K.ray_exit(np.repeat(c, J, axis=0), theta).reshape(B, J)
    out[inside] = (r ** (n - 1)) @ sub.weights / (n - 1)
    return out


def parallel_section(K: StarBody, xi, t, quad_sub: SphereQuadrature = None):
    """A_{K,xi}(t) for a scalar or an array of offsets t."""
    xi = as_directions(xi, K.dim)
    t_arr = np.asarray(t, dtype=float)
    flat = t_arr.ravel()
    vals = section_batch(K, np.broadcast_to(xi, (len(flat), K.dim)), flat, quad_sub)
    return float(vals[0]) if t_arr.ndim == 0 else vals.reshape(t_arr.shape)


# -- derivatives -------------------------------------------------------------
def _default_step(K, k):
    return np.finfo(float).eps ** (1.0 / (k + 2)) * K.outer_radius


def section_derivative(K: StarBody, xi, t, k=1, step=None, quad_sub=None):
    """k-th derivative (k = 1, 2) of t -> A_{K,xi}(t) by central differences.

    One Richardson step on top of the second-order stencil. Returns
    (value, error_estimate).
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    xi = as_directions(xi, K.dim)
    h = float(step) if step is not None else _default_step(K, k)
    h_plus, h_minus = K.support(xi), K.support(-xi)
    if t - h <= -h_minus or t + h >= h_plus:
        raise BoundaryError(f"stencil [t-h, t+h] = [{t - h}, {t + h}] leaves the support")
    offs = np.array([-h, -h / 2, 0.0, h / 2, h])
    A = section_batch(K, np.broadcast_to(xi, (5, K.dim)), t + offs, quad_sub, h_plus, h_minus)
    if k == 1:
        coarse = (A[4] - A[0]) / (2 * h)
        fine = (A[3] - A[1]) / h
    else:
        coarse = (A[4] - 2 * A[2] + A[0]) / h**2
        fine = (A[3] - 2 * A[2] + A[1]) / (h / 2) ** 2
    value = (4 * fine - coarse) / 3
    return float(value), float(abs(value - fine))


def central_slopes(K: StarBody, xi, step=None, quad_sub=None):
    """A'_{K,xi}(0) for every row of xi, by Richardson-extrapolated central differences.

    Returns (values, error_estimates).
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    h = float(step) if step is not None else _default_step(K, 1)
    if h >= K.inner_radius:
        raise BoundaryError("finite-difference step exceeds the inner radius")
    B = len(xi)
    offs = np.array([-h, -h / 2, h / 2, h])
    h_plus = np.asarray(K._support(xi))
    h_minus = np.asarray(K._support(-xi))
    A = section_batch(
        K, np.repeat(xi, 4, axis=0), np.tile(offs, B), quad_sub, np.repeat(h_plus, 4), np.repeat(h_minus, 4)
    ).reshape(B, 4)
    coarse = (A[:, 3] - A[:, 0]) / (2 * h)
    fine = (A[:, 2] - A[:, 1]) / h
    value = (4 * fine - coarse) / 3
    return value, np.abs(value - fine)


def prime_at_zero_2d(K: StarBody, theta, step=None):
    """A'_{K,xi}(0) for n = 2 and xi = (cos theta, sin theta), from the radial function.

    A'(0) = -rho'(theta + pi/2)/rho(theta + pi/2) + rho'(theta - pi/2)/rho(theta - pi/2),
    with rho' the angular derivative, taken by Richardson-extrapolated central
    differences.
    """
    if K.dim != 2:
        raise DimError("prime_at_zero_2d needs n = 2")
    if K.smoothness in ("polytope", "C0"):
        raise SmoothnessError("radial function is not C^1; mollify the body first")
    h = float(step) if step is not None else np.finfo(float).eps ** (1.0 / 3.0)

    def rho(phi):
        phi = np.asarray(phi, dtype=float)
        return K._radial(np.column_stack([np.cos(phi), np.sin(phi)]))

    def rho_and_slope(phi):
        vals = rho(phi + np.array([-h, -h / 2, 0.0, h / 2, h]))
        coarse = (vals[4] - vals[0]) / (2 * h)
        fine = (vals[3] - vals[1]) / h
        return vals[2], (4 * fine - coarse) / 3

    r_up, d_up = rho_and_slope(theta + np.pi / 2)
    r_dn, d_dn = rho_and_slope(theta - np.pi / 2)
    return float(-d_up / r_up + d_dn / r_dn)


# -- profiles ----------------------------------------------------------------
@dataclass
class SectionProfile:
    xi: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray
    derivative: np.ndarray
    concavity_residual: np.ndarray
    support_window: tuple
    meta: dict = field(default_factory=dict)

    def rows(self):
        return zip(self.t_grid, self.values, self.derivative, self.concavity_residual)


def concavity_residuals(values, n):
    """g_i - (g_{i-1} + g_{i+1})/2 for g = A^(1/(n-1)) on a uniform grid (NaN at the ends).

    Nonnegative residuals mean midpoint concavity.
    """
    g = np.maximum(np.asarray(values, dtype=float), 0.0) ** (1.0 / (n - 1))
    res = np.full(len(g), np.nan)
    res[1:-1] = g[1:-1] - 0.5 * (g[:-2] + g[2:])
    return res


def section_profile(K: StarBody, xi, t_grid=None, points=201, margin=0.01, quad_sub=None):
    """Sample A on a uniform t-grid inside the support window.

    The default grid leaves out the outer ``margin`` fraction of the window on
    each side, where the integrand is not smooth.
    """
    xi = as_directions(xi, K.dim)
    h_plus, h_minus = K.support(xi), K.support(-xi)
    if t_grid is None:
        width = h_plus + h_minus
        t_grid = np.linspace(-h_minus + margin * width, h_plus - margin * width, points)
    t_grid = np.asarray(t_grid, dtype=float)
    values = section_batch(K, np.broadcast_to(xi, (len(t_grid), K.dim)), t_grid, quad_sub, h_plus, h_minus)
    derivative = np.gradient(values, t_grid) if len(t_grid) > 2 else np.full(len(t_grid), np.nan)
    return SectionProfile(
        xi=np.array(xi),
        t_grid=t_grid,
        values=values,
        derivative=derivative,
        concavity_residual=concavity_residuals(values, K.dim),
        support_window=(-float(h_minus), float(h_plus)),
    )


# -- maximal sections ----------------------------------------------------------
@dataclass
class MaxSection:
    m: float
    t_star: float


def max_sections(K: StarBody, xi, quad_sub=None, h_plus=None, h_minus=None):
    """Vectorised m_K(xi) and t_K(xi) for rows of xi.

    Golden-section search on A^(1/(n-1)), concave on its support for convex
    K, to a bracket of 1e-10 R. If the maximiser lies on a plateau (flat to
    1e-12 relative) the plateau point nearest 0 is returned, found by a scan
    of step 1e-4 R toward the origin.
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    n = K.dim
    h_plus, h_minus = _slab(K, xi, h_plus, h_minus)
    h_plus = np.broadcast_to(h_plus, (len(xi),)).astype(float)
    h_minus = np.broadcast_to(h_minus, (len(xi),)).astype(float)
    R = K.outer_radius

    def g(t):
        return section_batch(K, xi, t, quad_sub, h_plus, h_minus) ** (1.0 / (n - 1))

    a, b = -h_minus.copy(), h_plus.copy()
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    while np.max(b - a) > MAX_TOL * R:
        left = gc >= gd  # maximiser in [a, d]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - GOLDEN * (b - a)
        new_d = a + GOLDEN * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        g_eval = g(np.where(left, c_next, d_next))
        gc, gd = np.where(left, g_eval, gd), np.where(left, gc, g_eval)
        c, d = c_next, d_next
    t_star = 0.5 * (a + b)
    A_star = section_batch(K, xi, t_star, quad_sub, h_plus, h_minus)
    A_zero = section_batch(K, xi, 0.0, quad_sub, h_plus, h_minus)
    m = np.maximum(A_star, A_zero)

    def flat(vals, ref):
        return vals >= ref * (1.0 - PLATEAU_FLAT)

    at_zero = flat(A_zero, m)
    t_star = np.where(at_zero, 0.0, np.where(A_star >= A_zero, t_star, 0.0))
    step = PLATEAU_SCAN * R
    probe = t_star - np.sign(t_star) * step
    on_plateau = ~at_zero & (np.abs(t_star) > step) & flat(section_batch(K, xi, probe, quad_sub, h_plus, h_minus), m)
    for i in np.flatnonzero(on_plateau):
        ts = np.arange(abs(t_star[i]), 0.0, -step) * np.sign(t_star[i])
        vals = section_batch(K, np.broadcast_to(xi[i], (len(ts), n)), ts, quad_sub, h_plus[i], h_minus[i])
        ok = flat(vals, m[i])
        # last index of the contiguous run starting at t_star
        run = len(ok) if ok.all() else int(np.argmin(ok))
        t_star[i] = ts[run - 1]
    return m, t_star


def max_section(K: StarBody, xi, quad_sub=None):
    xi = as_directions(xi, K.dim)
    m, t = max_sections(K, xi[None], quad_sub)
    return MaxSection(float(m[0]), float(t[0]))


# -- IK, CK --------------------------------------------------------------------
def intersection_body(K: StarBody, quad: SphereQuadrature, quad_sub=None):
    """IK tabulated on the grid nodes: rho_IK(xi) = A_{K,xi}(0)."""
    vals = section_batch(K, quad.nodes, 0.0, quad_sub, K.support_on(quad), _antipodal_support(K, quad))
    return TabulatedStarBody(quad, vals, label="intersection body")


def cross_section_body(K: StarBody, quad: SphereQuadrature, quad_sub=None):
    """CK tabulated on the grid nodes: rho_CK(xi) = max_t A_{K,xi}(t).

    The maximisers t_K(xi) are attached as ``t_star``.
    """
    m, t_star = max_sections(K, quad.nodes, quad_sub, K.support_on(quad), _antipodal_support(K, quad))
    body = TabulatedStarBody(quad, m, label="cross-section body")
    body.t_star = t_star
    return body


def _antipodal_support(K, quad):
    from scipy.spatial import cKDTree

    dist, idx = cKDTree(quad.nodes).query(-quad.nodes)
    h = K.support_on(quad)
    if dist.max() < 1e-12:
        return h[idx]
    return np.asarray(K._support(-quad.nodes))


# -- averaged sections -----------------------------------------------------------
def averaged_section(K: StarBody, t, quad: SphereQuadrature, route="definition", quad_sub=None):
    """f(t) = (1/omega_n) integral over the sphere of A_{K,xi}(t).

    ``route="definition"`` integrates computed sections; ``route="radial_formula"``
    uses f(t) = C~(n)/(n-1) * integral of (rho_K^2 - t^2)_+^((n-1)/2).
    """
    n = K.dim
    if route == "definition":
        A = section_batch(K, quad.nodes, t, quad_sub, K.support_on(quad), _antipodal_support(K, quad))
        return float(quad.weights @ A / sphere_area(n))
    if route == "radial_formula":
        rho = K.radial_on(quad)
        integrand = np.maximum(rho**2 - t * t, 0.0) ** (0.5 * (n - 1))
        return float(averaging_constant(n) / (n - 1) * (quad.weights @ integrand))
    raise ValueError(f"unknown route {route!r}")


def averaged_section_derivative(K: StarBody, t, quad: SphereQuadrature):
    """f'(t) = -C~(n) t * integral of (rho_K^2 - t^2)^((n-3)/2), valid for |t| < r."""
    n = K.dim
    rho = K.radial_on(quad)
    integrand = np.maximum(rho**2 - t * t, 0.0) ** (0.5 * (n - 3))
    return float(-averaging_constant(n) * t * (quad.weights @ integrand))


# -- Lipschitz audit ---------------------------------------------------------------
@dataclass
class LipschitzAudit:
    max_ratio: float
    bound: float
    holds: bool
    samples: int

    def __iter__(self):
        return iter((self.max_ratio, self.bound, self.holds))


def lipschitz_audit(K: StarBody, quad: SphereQuadrature, samples=200, seed=0, quad_sub=None):
    """Sample |A(t) - A(s)| / |t - s| over directions and s, t in [-r/2, r/2]."""
    rng = np.random.default_rng(seed)
    r, R, n = K.inner_radius, K.outer_radius, K.dim
    idx = rng.integers(0, len(quad), samples)
    xi = quad.nodes[idx]
    s = rng.uniform(-r / 2, r / 2, samples)
    t = rng.uniform(-r / 2, r / 2, samples)
    keep = np.abs(t - s) > 1e-6 * r
    xi, s, t = xi[keep], s[keep], t[keep]
    A_s = section_batch(K, xi, s, quad_sub)
    A_t = section_batch(K, xi, t, quad_sub)
    ratio = np.abs(A_t - A_s) / np.abs(t - s)
    bound = lipschitz_constant(n) * R ** (n - 1) / r
    max_ratio = float(ratio.max()) if len(ratio) else 0.0
    return LipschitzAudit(max_ratio, float(bound), bool(max_ratio <= bound), int(len(ratio)))
