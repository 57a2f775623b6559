"""Real spherical harmonics, condensed expansions and the operator I_p.

The basis of H_m^n is built recursively: with xi = (sin(phi) xi', cos(phi)),

    Y_{m,k,j}(xi) = c_{m,k} sin(phi)^k C^{(k + (n-2)/2)}_{m-k}(cos phi) Y'_{k,j}(xi')

where Y'_{k,j} runs over the basis of H_k^{n-1} and C is a Gegenbauer
polynomial. For n = 3 this is the real associated-Legendre basis; n = 2 is
the trigonometric basis {1/sqrt(2 pi), cos(m t)/sqrt(pi), sin(m t)/sqrt(pi)}.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import eval_gegenbauer, gammaln

from .errors import RangeError, ResolutionError
from .geometry.quadrature import SphereQuadrature, sphere_area
from .reports import CONSISTENT, VIOLATED, StabilityReport


def harmonic_dimension(n, m):
    """dim H_m^n."""
    if m < 0:
        return 0
    if n == 2:
        return 1 if m == 0 else 2
    return comb(m + n - 1, n - 1) - comb(m + n - 3, n - 1)


def _gegenbauer_norm_sq(N, lam):
    log_h = (
        np.log(np.pi)
        + (1.0 - 2.0 * lam) * np.log(2.0)
        + gammaln(N + 2.0 * lam)
        - gammaln(N + 1.0)
        - np.log(N + lam)
        - 2.0 * gammaln(lam)
    )
    return np.exp(log_h)


def basis_blocks(n, max_degree, dirs):
    """Evaluate every basis harmonic of degree <= max_degree.

    Returns a list whose m-th entry has shape (len(dirs), dim H_m^n).
    """
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if dirs.shape[1] != n:
        raise ValueError(f"directions must have {n} columns")
    if n == 2:
        theta = np.arctan2(dirs[:, 1], dirs[:, 0])
        blocks = [np.full((len(dirs), 1), 1.0 / np.sqrt(2.0 * np.pi))]
        for m in range(1, max_degree + 1):
            blocks.append(np.column_stack([np.cos(m * theta), np.sin(m * theta)]) / np.sqrt(np.pi))
        return blocks

    x = np.clip(dirs[:, -1], -1.0, 1.0)
    s = np.sqrt(np.maximum(1.0 - x * x, 0.0))
    sub = dirs[:, :-1].copy()
    pole = s < 1e-300
    sub[~pole] /= s[~pole, None]
    sub[pole] = 0.0
    sub[pole, 0] = 1.0
    sub_blocks = basis_blocks(n - 1, max_degree, sub)

    blocks = []
    for m in range(max_degree + 1):
        parts = []
        for k in range(m + 1):
            lam = k + 0.5 * (n - 2)
            N = m - k
            radial = s**k * eval_gegenbauer(N, lam, x) / np.sqrt(_gegenbauer_norm_sq(N, lam))
            parts.append(radial[:, None] * sub_blocks[k])
        blocks.append(np.concatenate(parts, axis=1))
    return blocks


@lru_cache(maxsize=32)
def _quad_basis(quad, max_degree):
    blocks = basis_blocks(quad.dim, max_degree, quad.nodes)
    for b in blocks:
        b.setflags(write=False)
    return blocks


def basis_eval(n, m, index, xi):
    """Value of the ``index``-th orthonormal basis harmonic of degree m at xi."""
    dim_m = harmonic_dimension(n, m)
    if not 0 <= index < dim_m:
        raise IndexError(f"index {index} out of range for dim H_{m}^{n} = {dim_m}")
    xi = np.asarray(xi, dtype=float)
    vals = basis_blocks(n, m, xi.reshape(-1, n))[m][:, index]
    return vals.reshape(xi.shape[:-1]) if xi.ndim > 1 else float(vals[0])


@dataclass
class HarmonicExpansion:
    """Per-degree coefficient blocks in the fixed real orthonormal basis."""

    dim: int
    max_degree: int
    blocks: list
    residual: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def is_complex(self):
        return any(np.iscomplexobj(b) for b in self.blocks)

    def block_norms_sq(self):
        return np.array([float(np.sum(np.abs(b) ** 2)) for b in self.blocks])

    def norm_sq(self):
        return float(self.block_norms_sq().sum())

    def synthesize(self, dirs):
        dirs = np.asarray(dirs, dtype=float)
        flat = dirs.reshape(-1, self.dim)
        basis = basis_blocks(self.dim, self.max_degree, flat)
        out = sum(basis[m] @ self.blocks[m] for m in range(self.max_degree + 1))
        return out.reshape(dirs.shape[:-1])

    def synthesize_on(self, quad):
        basis = _quad_basis(quad, self.max_degree)
        return sum(basis[m] @ self.blocks[m] for m in range(self.max_degree + 1))

    def scaled(self, factors):
        return HarmonicExpansion(
            self.dim, self.max_degree, [f * b for f, b in zip(factors, self.blocks)], self.residual, dict(self.meta)
        )

    def parity_part(self, odd):
        keep = [(m % 2 == 1) == odd for m in range(self.max_degree + 1)]
        return self.scaled([1.0 if k else 0.0 for k in keep])

    def records(self):
        rows = []
        for m, block in enumerate(self.blocks):
            for index, c in enumerate(block):
                c = complex(c)
                rows.append((m, index, c.real, c.imag))
        return rows


def expand(f, quad: SphereQuadrature, max_degree=24):
    """Condensed harmonic expansion of f by quadrature.

    f is a callable on (N, n) arrays of directions or an array of values on
    the quadrature nodes.
    """
    if quad.order < 2 * max_degree + 2:
        raise ResolutionError(
            f"quadrature order {quad.order} < 2*max_degree+2 = {2 * max_degree + 2}; coefficients would alias"
        )
    values = np.asarray(f(quad.nodes) if callable(f) else f)
    if values.shape != (len(quad),):
        raise ValueError("values must match the quadrature nodes")
    basis = _quad_basis(quad, max_degree)
    weighted = quad.weights * values
    blocks = [b.T @ weighted for b in basis]
    synth = sum(basis[m] @ blocks[m] for m in range(max_degree + 1))
    residual = float(np.sqrt(quad.weights @ np.abs(values - synth) ** 2))
    return HarmonicExpansion(quad.dim, max_degree, blocks, residual, {"grid_order": quad.order})


def _check_p(n, p):
    if not 0.0 < p < n:
        raise RangeError(f"I_p needs 0 < p < n; got p={p}, n={n}")


def lambda_eigenvalue(n, p, m):
    """Eigenvalue of I_p on H_m^n.

    Even m: 2^p pi^(n/2) (-1)^(m/2) Gamma((m+p)/2) / Gamma((m+n-p)/2), real.
    Odd m: i 2^p pi^(n/2) (-1)^((m-1)/2) Gamma((m+p)/2) / Gamma((m+n-p)/2).
    """
    _check_p(n, p)
    mag = np.exp(p * np.log(2.0) + 0.5 * n * np.log(np.pi) + gammaln(0.5 * (m + p)) - gammaln(0.5 * (m + n - p)))
    if m % 2 == 0:
        return complex((-1) ** (m // 2) * mag, 0.0)
    return complex(0.0, (-1) ** ((m - 1) // 2) * mag)


def eigenvalues(n, p, max_degree):
    return np.array([lambda_eigenvalue(n, p, m) for m in range(max_degree + 1)])


def apply_Ip(expansion: HarmonicExpansion, p):
    """Multiply each degree-m block by lambda_m(n, p)."""
    return expansion.scaled(eigenvalues(expansion.dim, p, expansion.max_degree))


def fourier_restriction(expansion: HarmonicExpansion, p):
    """Sphere restriction of the Fourier transform (kernel exp(-i<x,y>)) of
    the (-n+p)-homogeneous extension.

    Odd-degree eigenvalues are the complex conjugates of ``lambda_eigenvalue``,
    whose odd branch matches the exp(+i<x,y>) kernel.
    """
    lam = eigenvalues(expansion.dim, p, expansion.max_degree)
    return expansion.scaled(np.conj(lam))


def Ip_norm(expansion: HarmonicExpansion, p):
    """||I_p f||_2 via Parseval."""
    lam = eigenvalues(expansion.dim, p, expansion.max_degree)
    return float(np.sqrt(np.sum(np.abs(lam) ** 2 * expansion.block_norms_sq())))


def gradient_norm_sq(expansion: HarmonicExpansion):
    """||grad_o f||_2^2 = sum_m m (m + n - 2) ||Q_m||^2."""
    n = expansion.dim
    m = np.arange(expansion.max_degree + 1)
    return float(np.sum(m * (m + n - 2) * expansion.block_norms_sq()))


def central_slope_harmonic(K, xi, quad, max_degree=12):
    """A'_{K,xi}(0) from the odd part g(x) = rho_K(x)^(n-2) - rho_K(-x)^(n-2), n >= 3.

    With the eigenvalues above, I_2 g(xi) = 2 pi i (n-2) A'_{K,xi}(0), so the
    slope is the imaginary part divided by 2 pi (n-2).
    """
    n = K.dim
    if n < 3:
        raise RangeError("the harmonic slope identity needs n >= 3")
    g = K.radial_on(quad) ** (n - 2) - np.asarray(K._radial(-quad.nodes)) ** (n - 2)
    transformed = apply_Ip(expand(g, quad, max_degree), 2.0)
    vals = np.asarray(transformed.synthesize(np.asarray(xi, dtype=float)))
    return vals.imag / (2.0 * np.pi * (n - 2))


def keylemma_exponent(n, p):
    if n <= 2 * p:
        return 2.0 / (n + 1)
    return 4.0 / ((n + 2 - 2 * p) * (n + 1))


def keylemma_bound(K, L, p, quad, max_degree=24):
    """Compare ||I_p(rho_K^(n-p) - rho_L^(n-p))||_2 with rho(K, L).

    The regime constants are symbolic, so the verdict is a scaling check;
    the explicit gradient bound 16 (n-p)^2 R^(2(n+1-p)) r^-2 omega_n is
    evaluated and a failure there is reported as a violation.
    """
    from .geometry.metrics import radial_metric

    n = K.dim
    _check_p(n, p)
    rk = K.radial_on(quad)
    rl = L.radial_on(quad)
    f = rk ** (n - p) - rl ** (n - p)
    exp = expand(f, quad, max_degree)
    eps = Ip_norm(exp, p)
    dist = radial_metric(K, L, quad).value
    q = keylemma_exponent(n, p)
    r = min(K.inner_radius, L.inner_radius)
    R = max(K.outer_radius, L.outer_radius)
    grad_sq = gradient_norm_sq(exp)
    grad_bound = 16.0 * (n - p) ** 2 * R ** (2 * (n + 1 - p)) / r**2 * sphere_area(n)
    ratio = dist / eps**q if eps > 0 else (0.0 if dist == 0 else np.inf)
    holds = VIOLATED if grad_sq > grad_bound * (1 + 1e-9) else CONSISTENT
    return StabilityReport(
        theorem="keylemma",
        epsilon=eps,
        distance=dist,
        q_expected=q,
        holds=holds,
        grid_order=quad.order,
        dim=n,
        notes="C(n,p) symbolic; ratio distance/epsilon^q reported",
        extras={
            "p": p,
            "regime": "n<=2p" if n <= 2 * p else "n>2p",
            "ratio": ratio,
            "f_l2": float(np.sqrt(exp.norm_sq())),
            "grad_sq": grad_sq,
            "grad_bound": grad_bound,
            "residual": exp.residual,
        },
    )
