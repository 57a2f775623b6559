"""Conditional numba compilation controlled by SECTIONLAB_NUMBA."""
from .._config import numba_requested, thread_cap

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

NUMBA_ACTIVE = numba is not None and numba_requested()

if NUMBA_ACTIVE:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    _cap = thread_cap()
    if _cap is not None:
        numba.set_num_threads(min(_cap, numba.config.NUMBA_NUM_THREADS))


def maybe_njit(**options):
    """numba.njit(**options) when numba is active, otherwise the identity."""

    def wrap(func):
        if NUMBA_ACTIVE:
            return numba.njit(**options)(func)
        return func

    return wrap
