"""Runtime switches read from the environment.

SECTIONLAB_NUMBA   "0" forces the pure-numpy kernels (default: numba when importable)
SECTIONLAB_THREADS caps numba's thread pool
"""
import os


def numba_requested():
    return os.environ.get("SECTIONLAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def thread_cap():
    raw = os.environ.get("SECTIONLAB_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None
