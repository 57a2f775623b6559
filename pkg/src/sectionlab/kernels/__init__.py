"""Hot loops with a numba implementation and a pure-numpy fallback.

The numba path is used when numba imports and SECTIONLAB_NUMBA is not "0".
Both paths compute the same quantities; tests compare them directly.
"""
import numpy as np

from ._jit import NUMBA_ACTIVE
from .envelope import envelope_expectation_kernel, envelope_expectation_numpy
from .polygon import polygon_areas_kernel, polygon_areas_numpy

__all__ = ["NUMBA_ACTIVE", "envelope_expectation", "polygon_areas"]


def polygon_areas(alpha, beta, gamma, use_numba=None):
    """Areas of the halfplane polygons described row-wise by (alpha, beta, gamma)."""
    use_numba = NUMBA_ACTIVE if use_numba is None else (use_numba and NUMBA_ACTIVE)
    if not use_numba:
        return polygon_areas_numpy(alpha, beta, gamma)
    alpha = np.ascontiguousarray(alpha, dtype=float)
    out = np.empty(alpha.shape[0])
    polygon_areas_kernel(alpha, np.ascontiguousarray(beta, dtype=float), np.ascontiguousarray(gamma, dtype=float), out)
    return out


def envelope_expectation(alpha, beta, wq, table, use_numba=None):
    """Weighted expectation of the upper envelope of lines; see ``envelope``.

    ``table`` is (lo, h, W0, D0, W1, D1).
    """
    lo, h, W0, D0, W1, D1 = table
    use_numba = NUMBA_ACTIVE if use_numba is None else (use_numba and NUMBA_ACTIVE)
    if not use_numba:
        return envelope_expectation_numpy(alpha, beta, wq, lo, h, W0, D0, W1, D1)
    alpha = np.ascontiguousarray(alpha, dtype=float)
    out = np.empty(alpha.shape[0])
    envelope_expectation_kernel(
        alpha, np.ascontiguousarray(beta, dtype=float), np.ascontiguousarray(wq, dtype=float), float(lo), float(h), W0, D0, W1, D1, out
    )
    return out
