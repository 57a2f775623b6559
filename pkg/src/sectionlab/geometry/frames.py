"""Direction validation and deterministic orthonormal frames of xi-perp."""
import numpy as np

from ..errors import DimError, FrameError, RangeError

UNIT_TOL = 1e-10


def as_directions(xi, n):
    """Return ``xi`` as a float array of unit vectors with trailing size n."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0 or xi.shape[-1] != n:
        raise DimError(f"expected direction(s) in R^{n}, got shape {xi.shape}")
    norms = np.linalg.norm(xi, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise RangeError("directions must have unit norm")
    return xi


def normalize(x):
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def householder_frame(xi):
    """Orthonormal basis of xi-perp as the columns of an (..., n, n-1) array.

    Uses the reflection H = I - 2 v v^T / |v|^2 with v = xi + sign(xi_n) e_n,
    which sends e_n to a multiple of xi. Off the equator xi_n = 0 the frames
    of xi and -xi coincide exactly.
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.shape[-1]
    sign = np.where(xi[..., -1] >= 0.0, 1.0, -1.0)
    v = xi.copy()
    v[..., -1] += sign
    vv = np.einsum("...i,...i->...", v, v)
    H = np.eye(n) - 2.0 * v[..., :, None] * v[..., None, :] / vv[..., None, None]
    return H[..., :, : n - 1]


def check_orthogonal(xi, theta, tol=1e-12):
    """Raise FrameError unless theta is a unit vector orthogonal to xi."""
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(np.linalg.norm(theta, axis=-1) - 1.0) > tol):
        raise FrameError("theta must be a unit vector")
    if np.any(np.abs(np.einsum("...i,...i->...", xi, theta)) > tol):
        raise FrameError("theta must be orthogonal to xi")
