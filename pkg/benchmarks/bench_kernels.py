"""Time the numba kernels against their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N] [--size B]``.
The first numba call (compilation) is excluded from the timings.
"""
import argparse
import time

import numpy as np

from sectionlab.geometry.mollify import moment_table
from sectionlab.kernels import NUMBA_ACTIVE, envelope_expectation, polygon_areas


def polygon_inputs(rng, batch, faces=12):
    angles = rng.uniform(0, 2 * np.pi, (batch, faces))
    return np.cos(angles), np.sin(angles), rng.uniform(0.5, 1.5, (batch, faces))


def envelope_inputs(rng, batch, lines=8, nodes=96):
    """Rows of line offsets, shared slopes and shared probability weights."""
    alpha = rng.uniform(0.5, 2.0, (batch, lines))
    beta = rng.uniform(-3.0, 3.0, (nodes, lines))
    return alpha, beta, rng.dirichlet(np.ones(nodes))


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = func()
        times.append(time.perf_counter() - start)
    return min(times), result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=20000)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"numba active: {NUMBA_ACTIVE}")
    if not NUMBA_ACTIVE:
        print("numba path disabled; only the numpy fallback is timed")

    a, b, g = polygon_inputs(rng, args.size)
    cases = [("polygon_areas", lambda use: polygon_areas(a, b, g, use_numba=use))]
    table = moment_table(0.1, 3)
    ea, eb, wq = envelope_inputs(rng, args.size // 10)
    cases.append(("envelope_expectation", lambda use: envelope_expectation(ea, eb, wq, table, use_numba=use)))

    print(f"{'kernel':<22}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max |diff|':>14}")
    for name, run in cases:
        t_np, ref = best_of(lambda: run(False), args.repeat)
        if NUMBA_ACTIVE:
            run(True)  # compile
            t_nb, out = best_of(lambda: run(True), args.repeat)
            diff = float(np.nanmax(np.abs(out - ref)))
            print(f"{name:<22}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{diff:>14.2e}")
        else:
            print(f"{name:<22}{t_np:>12.4f}{'-':>12}{'-':>10}{'-':>14}")


if __name__ == "__main__":
    main()
