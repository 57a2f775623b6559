"""Expected upper envelope of lines against a tabulated radial density.

For every row p the kernel returns

    sum_q w[q] * integral_lo^hi dens(s) max_i (alpha[p, i] + s beta[q, i]) ds

which is the mollified Minkowski functional of a polytope at direction p
(alpha = <a_i, xi_p> / b_i, beta = <a_i, eta_q> / b_i). Between crossings
the envelope is a single line, so each piece integrates exactly against the
cumulative moments W0(u) = int dens and W1(u) = int s dens, which are stored
on a uniform table and evaluated by cubic Hermite interpolation with exact
end-point derivatives.
"""
import numpy as np

from ._jit import maybe_njit

try:
    from numba import prange
except ImportError:  # pragma: no cover
    prange = range


def hermite_numpy(x, lo, h, W, D):
    n = len(W) - 1
    t = np.clip((x - lo) / h, 0.0, n)
    k = np.minimum(t.astype(np.intp), n - 1)
    tau = t - k
    t2 = tau * tau
    t3 = t2 * tau
    return (
        (2 * t3 - 3 * t2 + 1) * W[k]
        + (t3 - 2 * t2 + tau) * h * D[k]
        + (-2 * t3 + 3 * t2) * W[k + 1]
        + (t3 - t2) * h * D[k + 1]
    )


def envelope_expectation_numpy(alpha, beta, wq, lo, h, W0, D0, W1, D1, chunk=32):
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    P, m = alpha.shape
    hi = lo + h * (len(W0) - 1)
    i, j = np.triu_indices(m, k=1)
    out = np.empty(P)
    for start in range(0, P, chunk):
        a = alpha[start : start + chunk, None, :]  # (c, 1, m)
        b = beta[None, :, :]  # (1, Q, m)
        da = a[..., i] - a[..., j]
        db = b[..., j] - b[..., i]
        with np.errstate(divide="ignore", invalid="ignore"):
            cross = np.where(db != 0, da / np.where(db != 0, db, 1.0), lo)
        cross = np.clip(cross, lo, hi)
        shape = cross.shape[:2]
        pts = np.concatenate([np.full(shape + (1,), lo), cross, np.full(shape + (1,), hi)], axis=-1)
        pts.sort(axis=-1)
        mid = 0.5 * (pts[..., 1:] + pts[..., :-1])
        vals = a[..., None, :] + mid[..., None] * b[..., None, :]  # (c, Q, K-1, m)
        best = np.argmax(vals, axis=-1)
        aa = np.take_along_axis(np.broadcast_to(a, shape + (m,)), best, axis=-1)
        bb = np.take_along_axis(np.broadcast_to(b, shape + (m,)), best, axis=-1)
        w0 = hermite_numpy(pts, lo, h, W0, D0)
        w1 = hermite_numpy(pts, lo, h, W1, D1)
        g = (aa * np.diff(w0, axis=-1) + bb * np.diff(w1, axis=-1)).sum(axis=-1)
        out[start : start + chunk] = g @ wq
    return out


@maybe_njit(cache=True)
def _hermite_scalar(x, lo, h, W, D):
    n = len(W) - 1
    t = (x - lo) / h
    if t < 0.0:
        t = 0.0
    if t > n:
        t = float(n)
    k = int(t)
    if k > n - 1:
        k = n - 1
    tau = t - k
    t2 = tau * tau
    t3 = t2 * tau
    return (
        (2 * t3 - 3 * t2 + 1) * W[k]
        + (t3 - 2 * t2 + tau) * h * D[k]
        + (-2 * t3 + 3 * t2) * W[k + 1]
        + (t3 - t2) * h * D[k + 1]
    )


@maybe_njit(parallel=True, cache=True)
def envelope_expectation_kernel(alpha, beta, wq, lo, h, W0, D0, W1, D1, out):
    P, m = alpha.shape
    Q = beta.shape[0]
    hi = lo + h * (len(W0) - 1)
    for p in prange(P):
        total = 0.0
        for q in range(Q):
            # active line at the left end (ties go to the steeper line)
            cur = 0
            best = alpha[p, 0] + lo * beta[q, 0]
            for k in range(1, m):
                v = alpha[p, k] + lo * beta[q, k]
                if v > best or (v == best and beta[q, k] > beta[q, cur]):
                    best = v
                    cur = k
            s = lo
            acc = 0.0
            w0s = _hermite_scalar(s, lo, h, W0, D0)
            w1s = _hermite_scalar(s, lo, h, W1, D1)
            while True:
                nxt = -1
                cmin = hi
                for k in range(m):
                    db = beta[q, k] - beta[q, cur]
                    if db <= 0.0:
                        continue
                    c = (alpha[p, cur] - alpha[p, k]) / db
                    if c < s:
                        c = s
                    if c < cmin or (c == cmin and nxt >= 0 and beta[q, k] > beta[q, nxt]):
                        cmin = c
                        nxt = k
                w0e = _hermite_scalar(cmin, lo, h, W0, D0)
                w1e = _hermite_scalar(cmin, lo, h, W1, D1)
                acc += alpha[p, cur] * (w0e - w0s) + beta[q, cur] * (w1e - w1s)
                if nxt < 0 or cmin >= hi:
                    break
                s = cmin
                w0s = w0e
                w1s = w1e
                cur = nxt
            total += wq[q] * acc
        out[p] = total
