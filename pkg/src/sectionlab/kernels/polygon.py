"""Area of planar polygons given as intersections of halfplanes.

Row b describes {(u, v) : alpha[b, i] u + beta[b, i] v <= gamma[b, i]}. The
polygon is bounded whenever the rows come from slicing a bounded polytope.
Vertices are the feasible pairwise line intersections; they are sorted by
angle about their mean and summed with the shoelace formula.
"""
import numpy as np

from ._jit import maybe_njit

try:
    from numba import prange
except ImportError:  # pragma: no cover
    prange = range

PARALLEL_TOL = 1e-14
FEAS_REL = 1e-12


def polygon_areas_numpy(alpha, beta, gamma):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    B, m = alpha.shape
    flat = np.abs(alpha) + np.abs(beta) < PARALLEL_TOL
    empty = (flat & (gamma < 0)).any(axis=1)
    # constraints parallel to the plane are dropped (trivially satisfied)
    gamma_eff = np.where(flat, np.inf, gamma)

    i, j = np.triu_indices(m, k=1)
    det = alpha[:, i] * beta[:, j] - alpha[:, j] * beta[:, i]
    ok = np.abs(det) > PARALLEL_TOL
    safe = np.where(ok, det, 1.0)
    u = (gamma[:, i] * beta[:, j] - gamma[:, j] * beta[:, i]) / safe
    v = (alpha[:, i] * gamma[:, j] - alpha[:, j] * gamma[:, i]) / safe

    scale = 1.0 + np.abs(u) + np.abs(v)
    lhs = alpha[:, None, :] * u[..., None] + beta[:, None, :] * v[..., None]
    feas = ok & (lhs <= gamma_eff[:, None, :] + FEAS_REL * scale[..., None] * (1.0 + np.abs(gamma_eff[:, None, :]))).all(axis=2)
    count = feas.sum(axis=1)

    w = feas.astype(float)
    cu = (u * w).sum(axis=1) / np.maximum(count, 1)
    cv = (v * w).sum(axis=1) / np.maximum(count, 1)
    ang = np.where(feas, np.arctan2(v - cv[:, None], u - cu[:, None]), np.inf)
    order = np.argsort(ang, axis=1, kind="stable")
    us = np.take_along_axis(u, order, axis=1)
    vs = np.take_along_axis(v, order, axis=1)
    fs = np.take_along_axis(feas, order, axis=1)
    # pad infeasible tail with the first vertex so it closes the loop with zero-area edges
    us = np.where(fs, us, us[:, :1])
    vs = np.where(fs, vs, vs[:, :1])
    area = 0.5 * (us * np.roll(vs, -1, axis=1) - np.roll(us, -1, axis=1) * vs).sum(axis=1)
    area = np.abs(area)
    area[(count < 3) | empty] = 0.0
    return area


@maybe_njit(parallel=True, cache=True)
def polygon_areas_kernel(alpha, beta, gamma, out):
    B, m = alpha.shape
    npairs = m * (m - 1) // 2
    for b in prange(B):
        out[b] = 0.0
        empty = False
        for k in range(m):
            if abs(alpha[b, k]) + abs(beta[b, k]) < PARALLEL_TOL and gamma[b, k] < 0.0:
                empty = True
        if empty:
            continue
        us = np.empty(npairs)
        vs = np.empty(npairs)
        cnt = 0
        for i in range(m):
            for j in range(i + 1, m):
                det = alpha[b, i] * beta[b, j] - alpha[b, j] * beta[b, i]
                if abs(det) <= PARALLEL_TOL:
                    continue
                u = (gamma[b, i] * beta[b, j] - gamma[b, j] * beta[b, i]) / det
                v = (alpha[b, i] * gamma[b, j] - alpha[b, j] * gamma[b, i]) / det
                scale = 1.0 + abs(u) + abs(v)
                feasible = True
                for k in range(m):
                    if abs(alpha[b, k]) + abs(beta[b, k]) < PARALLEL_TOL:
                        continue
                    g = gamma[b, k]
                    if alpha[b, k] * u + beta[b, k] * v > g + FEAS_REL * scale * (1.0 + abs(g)):
                        feasible = False
                        break
                if feasible:
                    us[cnt] = u
                    vs[cnt] = v
                    cnt += 1
        if cnt < 3:
            continue
        cu = 0.0
        cv = 0.0
        for k in range(cnt):
            cu += us[k]
            cv += vs[k]
        cu /= cnt
        cv /= cnt
        ang = np.empty(cnt)
        for k in range(cnt):
            ang[k] = np.arctan2(vs[k] - cv, us[k] - cu)
        order = np.argsort(ang, kind="mergesort")
        s = 0.0
        for k in range(cnt):
            p = order[k]
            q = order[(k + 1) % cnt]
            s += us[p] * vs[q] - us[q] * vs[p]
        out[b] = abs(0.5 * s)
