"""Grid metrics between bodies and the Hausdorff/L2 comparison."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DimError, ResolutionError
from .bodies import StarBody
from .quadrature import SphereQuadrature, ball_volume, sphere_area

MIN_METRIC_ORDER = 8
REFINE_RTOL = 1e-3


def _same_dim(K, L):
    if K.dim != L.dim:
        raise DimError(f"dimension mismatch: {K.dim} vs {L.dim}")


def _check_grid(K, quad):
    if quad.dim != K.dim:
        raise DimError(f"grid lives on S^{quad.dim - 1}, body in R^{K.dim}")
    if quad.order < MIN_METRIC_ORDER:
        raise ResolutionError(f"grid order {quad.order} below the minimum {MIN_METRIC_ORDER}")


@dataclass
class RadialDistance:
    value: float
    node: np.ndarray
    grid_order: int
    refinements: int = 0
    converged: Optional[bool] = None

    def __float__(self):
        return self.value


def radial_metric(K: StarBody, L: StarBody, quad: SphereQuadrature, refine=False, max_refinements=4):
    """max over grid nodes of |rho_K - rho_L|, with the maximising node.

    With ``refine`` the grid order doubles until the maximum changes by less
    than a relative 1e-3 (or ``max_refinements`` is exhausted).
    """
    _same_dim(K, L)
    _check_grid(K, quad)

    def measure(q):
        diff = np.abs(K.radial_on(q) - L.radial_on(q))
        i = int(np.argmax(diff))
        return float(diff[i]), q.nodes[i].copy()

    value, node = measure(quad)
    if not refine:
        return RadialDistance(value, node, quad.order)
    q = quad
    for k in range(1, max_refinements + 1):
        q = q.refined()
        new_value, new_node = measure(q)
        done = abs(new_value - value) <= REFINE_RTOL * max(abs(new_value), np.finfo(float).tiny)
        value, node = new_value, new_node
        if done:
            return RadialDistance(value, node, q.order, k, True)
    return RadialDistance(value, node, q.order, max_refinements, False)


def support(body: StarBody, xi):
    """h_K(xi) = sup over K of <x, xi>."""
    return body.support(xi)


def support_on(body: StarBody, quad: SphereQuadrature):
    return body.support_on(quad)


def hausdorff_and_l2(K: StarBody, L: StarBody, quad: SphereQuadrature):
    """(delta_inf, delta_2) from support functions on the grid."""
    _same_dim(K, L)
    _check_grid(K, quad)
    diff = support_on(K, quad) - support_on(L, quad)
    return float(np.abs(diff).max()), float(np.sqrt(quad.weights @ diff**2))


@dataclass
class VitaleResult:
    lower: float
    middle: float
    upper: float
    holds: bool
    diameter: float
    delta_inf: float
    delta_2: float
    mode: str

    def __iter__(self):
        return iter((self.lower, self.middle, self.upper, self.holds))


def vitale_check(K: StarBody, L: StarBody, quad: SphereQuadrature, mode="direct", slack=1e-9):
    """Check c D^(1-n) delta_inf^(n+1) <= delta_2^2 <= omega_n delta_inf^2.

    ``mode="direct"`` compares support functions of K and L; ``mode="polar"``
    compares the polar bodies, whose support functions are the Minkowski
    functionals 1/rho. D is max over nodes of h(xi) + h(-xi) for the union.
    """
    _same_dim(K, L)
    _check_grid(K, quad)
    n = K.dim
    if mode == "direct":
        hk, hl = support_on(K, quad), support_on(L, quad)
        hk_neg, hl_neg = K._support(-quad.nodes), L._support(-quad.nodes)
    elif mode == "polar":
        hk, hl = 1.0 / K.radial_on(quad), 1.0 / L.radial_on(quad)
        hk_neg, hl_neg = 1.0 / K._radial(-quad.nodes), 1.0 / L._radial(-quad.nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    diff = hk - hl
    d_inf = float(np.abs(diff).max())
    d_2 = float(np.sqrt(quad.weights @ diff**2))
    D = float((np.maximum(hk, hl) + np.maximum(hk_neg, hl_neg)).max())
    lower = 2.0 * ball_volume(n - 1) * D ** (1 - n) / (n * (n + 1)) * d_inf ** (n + 1)
    middle = d_2**2
    upper = sphere_area(n) * d_inf**2
    tiny = 1e-300
    holds = lower <= middle * (1 + slack) + tiny and middle <= upper * (1 + slack) + tiny
    return VitaleResult(lower, middle, upper, bool(holds), D, d_inf, d_2, mode)

