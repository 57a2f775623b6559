"""Product quadratures on the unit sphere and the ball/sphere constants.

All sphere integrals use the non-normalized surface measure, so the weights
of every grid sum to the surface area of the sphere.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, roots_jacobi, roots_legendre

from ..errors import RangeError


def ball_volume(n):
    """Volume of the unit ball in R^n."""
    return float(np.exp(0.5 * n * np.log(np.pi) - gammaln(0.5 * n + 1.0)))


def sphere_area(n):
    """Surface area of S^{n-1} (= n times the unit-ball volume)."""
    return n * ball_volume(n)


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes and positive weights on S^{n-1}.

    ``order`` is the construction parameter; ``degree`` is the largest total
    degree of polynomials integrated exactly.
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    degree: int

    def __len__(self):
        return len(self.weights)

    def integrate(self, values):
        """Weighted sum over the last axis of ``values``."""
        return np.asarray(values) @ self.weights

    def refined(self):
        return sphere_grid(self.dim, 2 * self.order)


def _polar_rule(n, count):
    # x = cos(polar angle); measure (1 - x^2)^((n-3)/2) dx
    if n == 3:
        return roots_legendre(count)
    a = 0.5 * (n - 3)
    return roots_jacobi(count, a, a)


def _grid(n, n_polar, n_circle):
    if n == 2:
        theta = 2.0 * np.pi * np.arange(n_circle) / n_circle
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(n_circle, 2.0 * np.pi / n_circle)
        return nodes, weights
    sub_nodes, sub_w = _grid(n - 1, n_polar, n_circle)
    x, wx = _polar_rule(n, n_polar)
    s = np.sqrt(1.0 - x * x)
    nodes = np.concatenate(
        [s[:, None, None] * sub_nodes[None, :, :], np.broadcast_to(x[:, None, None], (len(x), len(sub_w), 1))],
        axis=2,
    ).reshape(-1, n)
    weights = (wx[:, None] * sub_w[None, :]).ravel()
    return nodes, weights


@lru_cache(maxsize=64)
def sphere_grid(n, order):
    """Quadrature on S^{n-1}.

    n = 2 gives ``order`` equally spaced angles (exact to degree order-1).
    n >= 3 gives a product rule: ``order`` Gauss nodes in each polar angle
    (Legendre for n = 3, Gauss-Jacobi beyond) and 2*order equally spaced
    azimuths, exact to degree 2*order-1. The last coordinate is the pole.
    """
    n = int(n)
    order = int(order)
    if n < 2:
        raise RangeError(f"sphere dimension n must be >= 2, got {n}")
    if order < 4:
        raise RangeError(f"quadrature order must be >= 4, got {order}")
    if n == 2:
        nodes, weights = _grid(2, 0, order)
        degree = order - 1
    else:
        nodes, weights = _grid(n, order, 2 * order)
        degree = 2 * order - 1
    nodes = nodes / np.linalg.norm(nodes, axis=1, keepdims=True)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereQuadrature(n, nodes, weights, order, degree)


def default_subgrid(n):
    """S^{n-2} quadrature used for slice integrals in R^n (None for n = 2)."""
    if n == 2:
        return None
    if n == 3:
        return sphere_grid(2, 64)
    return sphere_grid(n - 1, 12)
