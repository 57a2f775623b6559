"""Smooth approximants of a star body by averaging its Minkowski functional.

    ||x||_{K_delta} = integral ||x + |x| z||_K phi_delta(|z|) dz

with phi_delta a smooth bump supported in delta/2 <= |z| <= delta and unit
mass. The z-integral splits into a radial part s = |z| and a direction
eta on the sphere. Directions use a product sphere rule; the radial part is
exact for polytopes (piecewise-linear integrand, tabulated moments) and
Gauss-Legendre otherwise. Weights are normalised so the discrete measure is
a probability measure, which keeps r/(1+delta) <= rho <= R/(1-delta) exact.
"""
from functools import cached_property

import numpy as np
from scipy.special import roots_legendre

from ..errors import RangeError
from ..kernels import envelope_expectation
from .bodies import Polytope, StarBody
from .quadrature import sphere_grid


def _default_eta_order(n):
    return {2: 256, 3: 24}.get(n, 8)


def bump_density(s, delta, n):
    """Unnormalised radial density exp(-1/(1-v^2)) s^(n-1) on [delta/2, delta]."""
    s = np.asarray(s, dtype=float)
    v = (s - 0.75 * delta) / (0.25 * delta)
    out = np.zeros_like(s)
    inside = np.abs(v) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - v[inside] ** 2)) * s[inside] ** (n - 1)
    return out


def moment_table(delta, n, size=2048, cell_nodes=10):
    """(lo, h, W0, D0, W1, D1) for the normalised radial density."""
    lo, hi = 0.5 * delta, delta
    grid = np.linspace(lo, hi, size + 1)
    h = grid[1] - grid[0]
    x, w = roots_legendre(cell_nodes)
    s = 0.5 * (grid[:-1, None] + grid[1:, None]) + 0.5 * h * x[None, :]
    dens = bump_density(s, delta, n)
    W0 = np.concatenate([[0.0], np.cumsum((dens * w).sum(axis=1) * 0.5 * h)])
    W1 = np.concatenate([[0.0], np.cumsum((dens * s * w).sum(axis=1) * 0.5 * h)])
    mass = W0[-1]
    D0 = bump_density(grid, delta, n) / mass
    return lo, h, W0 / mass, D0, W1 / mass, D0 * grid


class MollifiedBody(StarBody):
    """K_delta built from a base body K at fixed 0 < delta < 1."""

    smoothness = "Cinf"
    kind = "mollified"

    def __init__(self, body: StarBody, delta, eta_order=None, radial_nodes=24, table_size=2048):
        if not 0.0 < delta < 1.0:
            raise RangeError(f"delta must lie in (0, 1), got {delta}")
        super().__init__(body.dim)
        self.body = body
        self.delta = float(delta)
        self.convex = body.convex
        n = self.dim
        self.eta_order = int(eta_order or _default_eta_order(n))
        eta = sphere_grid(n, self.eta_order)
        self._eta = eta.nodes
        self._eta_w = eta.weights / eta.weights.sum()
        if isinstance(body, Polytope):
            self._table = moment_table(self.delta, n, table_size)
            self._beta = self._eta @ (body.normals / body.offsets[:, None]).T
        else:
            x, w = roots_legendre(radial_nodes)
            s = 0.75 * self.delta + 0.25 * self.delta * x
            ws = w * bump_density(s, self.delta, n)
            self._s = s
            self._s_w = ws / ws.sum()

    def unit_gauge(self, xi):
        """||xi||_{K_delta} for unit rows xi."""
        xi = np.atleast_2d(xi)
        body = self.body
        if isinstance(body, Polytope):
            alpha = xi @ (body.normals / body.offsets[:, None]).T
            return envelope_expectation(alpha, self._beta, self._eta_w, self._table)
        out = np.empty(len(xi))
        S, Q = len(self._s), len(self._eta)
        chunk = max(1, 400_000 // (S * Q))
        for start in range(0, len(xi), chunk):
            x = xi[start : start + chunk]
            y = x[:, None, None, :] + self._s[None, :, None, None] * self._eta[None, None, :, :]
            g = np.asarray(body.gauge(y.reshape(-1, self.dim))).reshape(len(x), S, Q)
            out[start : start + chunk] = np.einsum("psq,s,q->p", g, self._s_w, self._eta_w)
        return out

    def _radial(self, xi):
        return 1.0 / self.unit_gauge(xi)

    @cached_property
    def _radii(self):
        return self.body.inner_radius / (1.0 + self.delta), self.body.outer_radius / (1.0 - self.delta)

    def spec(self):
        return {
            "type": "mollified",
            "dim": self.dim,
            "parameters": {"body": self.body.spec(), "delta": self.delta, "eta_order": self.eta_order},
        }


def mollify(body: StarBody, delta, **options):
    """Return the smooth approximant K_delta of ``body``."""
    return MollifiedBody(body, delta, **options)
