"""Star body representations.

Every body exposes a vectorised radial function on unit directions, the
Minkowski functional, ray exits from interior points, the support function
and certified radii r <= rho <= R. Bodies are immutable after construction.
"""
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import cKDTree

from ..errors import InvalidBody
from .frames import as_directions, householder_frame, normalize
from .quadrature import SphereQuadrature, sphere_area, sphere_grid

SMOOTHNESS = ("polytope", "C0", "Cm", "Cinf")
BISECTION_STEPS = 60
ILLINOIS_STEPS = 100


def _cloud_grid(n):
    if n == 2:
        return sphere_grid(2, 720)
    if n == 3:
        return sphere_grid(3, 48)
    return sphere_grid(n, 10)


def maximize_on_sphere(objective, start, step, tol=1e-11, max_sweeps=400):
    """Batched compass search for local maxima of ``objective`` on the sphere.

    ``objective`` maps a (B, n) array of unit vectors to B values, one
    independent problem per row. Each sweep tries +-step along every tangent
    direction of the current iterate, keeps the best improvement and halves
    the step of rows that did not improve.
    """
    eta = normalize(np.array(start, dtype=float))
    f = objective(eta)
    steps = np.full(len(eta), float(step))
    n = eta.shape[1]
    for _ in range(max_sweeps):
        active = steps > tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        frames = householder_frame(eta[idx])
        best_f = f[idx].copy()
        best_eta = eta[idx].copy()
        for j in range(n - 1):
            for sgn in (1.0, -1.0):
                cand = normalize(eta[idx] + sgn * steps[idx, None] * frames[:, :, j])
                fc = _evaluate(objective, cand, idx)
                better = fc > best_f
                best_f[better] = fc[better]
                best_eta[better] = cand[better]
        improved = best_f > f[idx]
        eta[idx[improved]] = best_eta[improved]
        f[idx[improved]] = best_f[improved]
        steps[idx[~improved]] *= 0.5
    return eta, f


def _evaluate(objective, cand, idx):
    # objectives may depend on the row (e.g. support in direction xi_i)
    if getattr(objective, "row_dependent", False):
        return objective(cand, idx)
    return objective(cand)


class _RowObjective:
    row_dependent = True

    def __init__(self, func):
        self.func = func

    def __call__(self, eta, idx=None):
        return self.func(eta, idx)


class StarBody:
    """Base class: a compact star body with the origin in its interior."""

    smoothness = "C0"
    convex = False
    kind = "star"

    def __init__(self, dim):
        if dim < 2:
            raise InvalidBody(f"dimension must be >= 2, got {dim}")
        self.dim = int(dim)
        self._node_cache = {}

    # -- radial function -------------------------------------------------
    def _radial(self, xi):
        raise NotImplementedError

    def radial(self, xi):
        """rho_K(xi) for one direction or an array of directions."""
        xi = as_directions(xi, self.dim)
        out = self._radial(xi.reshape(-1, self.dim)).reshape(xi.shape[:-1])
        return float(out) if out.ndim == 0 else out

    def _cached_on(self, name, quad, compute):
        key = (name, id(quad))
        hit = self._node_cache.get(key)
        if hit is None or hit[0] is not quad:
            vals = np.asarray(compute(quad.nodes), dtype=float)
            vals.setflags(write=False)
            hit = (quad, vals)
            self._node_cache[key] = hit
        return hit[1]

    def radial_on(self, quad: SphereQuadrature):
        """Radial values on the quadrature nodes (cached per grid)."""
        return self._cached_on("radial", quad, self._radial)

    def support_on(self, quad: SphereQuadrature):
        """Support values on the quadrature nodes (cached per grid)."""
        return self._cached_on("support", quad, self._support)

    def gauge(self, x):
        """Minkowski functional |x| / rho(x/|x|)."""
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, self.dim)
        norms = np.linalg.norm(flat, axis=1)
        out = np.zeros(len(flat))
        nz = norms > 0
        if nz.any():
            out[nz] = norms[nz] / self._radial(flat[nz] / norms[nz, None])
        out = out.reshape(x.shape[:-1])
        return float(out) if out.ndim == 0 else out

    def contains(self, x, slack=0.0):
        return np.asarray(self.gauge(x)) <= 1.0 + slack

    def ray_exit(self, p, d):
        """Distance s >= 0 with p + s d on the boundary, for interior p.

        Convex bodies have a single crossing, found by a bracketed Illinois
        iteration on gauge - 1; other star bodies bisect the Minkowski
        functional to machine precision. Points outside the body give 0.
        """
        p = np.atleast_2d(np.asarray(p, dtype=float))
        d = np.atleast_2d(np.asarray(d, dtype=float))
        p, d = np.broadcast_arrays(p, d)
        if not p.any():
            return self._radial(d)
        lo = np.zeros(len(p))
        hi = np.full(len(p), 2.0 * self.outer_radius + np.linalg.norm(p, axis=1))
        g0 = np.asarray(self.gauge(p), dtype=float)
        inside0 = g0 < 1.0
        if self.convex:
            s = self._illinois(p, d, lo, hi, g0 - 1.0)
            return np.where(inside0, s, 0.0)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            inside = np.asarray(self.gauge(p + mid[:, None] * d)) <= 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        return np.where(inside0, 0.5 * (lo + hi), 0.0)

    def _illinois(self, p, d, lo, hi, f_lo):
        f_hi = np.asarray(self.gauge(p + hi[:, None] * d), dtype=float) - 1.0
        side = np.zeros(len(p), dtype=np.int8)
        active = np.flatnonzero((f_lo < 0.0) & (f_hi > 0.0))
        for _ in range(ILLINOIS_STEPS):
            if not len(active):
                break
            a, b, fa, fb = lo[active], hi[active], f_lo[active], f_hi[active]
            s = (a * fb - b * fa) / (fb - fa)
            s = np.where((s > a) & (s < b), s, 0.5 * (a + b))
            f = np.asarray(self.gauge(p[active] + s[:, None] * d[active]), dtype=float) - 1.0
            right = f > 0.0
            # Illinois: halve the stale endpoint value when the same side moves twice
            last = side[active]
            f_lo[active] = np.where(right, np.where(last == 1, 0.5 * fa, fa), f)
            f_hi[active] = np.where(right, f, np.where(last == -1, 0.5 * fb, fb))
            lo[active] = np.where(right, a, s)
            hi[active] = np.where(right, s, b)
            side[active] = np.where(right, 1, -1)
            width = hi[active] - lo[active]
            done = (f == 0.0) | (width <= 4 * np.finfo(float).eps * np.maximum(hi[active], 1.0))
            done |= np.abs(f) <= 2 * np.finfo(float).eps
            lo[active[f == 0.0]] = s[f == 0.0]
            hi[active[f == 0.0]] = s[f == 0.0]
            active = active[~done]
        # the side that moved last holds the iterate
        return np.where(side == 1, hi, np.where(side == -1, lo, 0.5 * (lo + hi)))

    # -- support function ------------------------------------------------
    @cached_property
    def _boundary_cloud(self):
        grid = _cloud_grid(self.dim)
        pts = self._radial(grid.nodes)[:, None] * grid.nodes
        step = np.pi / grid.order
        return grid.nodes, pts, step

    def _support_search(self, xi):
        dirs, pts, step = self._boundary_cloud
        start = dirs[np.argmax(xi @ pts.T, axis=1)]

        def obj(eta, idx=None):
            rows = xi if idx is None else xi[idx]
            return self._radial(eta) * np.einsum("ij,ij->i", eta, rows)

        eta, f = maximize_on_sphere(_RowObjective(obj), start, step)
        return f, self._radial(eta)[:, None] * eta

    def _support(self, xi):
        return self._support_search(xi)[0]

    def _support_point(self, xi):
        return self._support_search(xi)[1]

    def support(self, xi):
        """h_K(xi) = max over K of <x, xi>."""
        xi = as_directions(xi, self.dim)
        out = self._support(xi.reshape(-1, self.dim)).reshape(xi.shape[:-1])
        return float(out) if out.ndim == 0 else out

    def support_point(self, xi):
        """A boundary point x with <x, xi> = h_K(xi)."""
        xi = as_directions(xi, self.dim)
        return self._support_point(xi.reshape(-1, self.dim)).reshape(xi.shape)

    # -- radii ------------------------------------------------------------
    def _extreme_radii(self):
        dirs, pts, step = self._boundary_cloud
        rho = np.linalg.norm(pts, axis=1)
        k = min(8, len(rho))
        lo_start = dirs[np.argsort(rho)[:k]]
        hi_start = dirs[np.argsort(-rho)[:k]]
        _, fmin = maximize_on_sphere(lambda e: -self._radial(e), lo_start, step)
        _, fmax = maximize_on_sphere(self._radial, hi_start, step)
        return float(-fmin.max()), float(fmax.max())

    @cached_property
    def _radii(self):
        return self._extreme_radii()

    @property
    def inner_radius(self):
        return self._radii[0]

    @property
    def outer_radius(self):
        return self._radii[1]

    def check_radii(self, quad, tol=1e-12):
        """Raise InvalidBody if r <= rho <= R fails on the grid."""
        rho = self.radial_on(quad)
        if rho.min() < self.inner_radius * (1 - tol) or rho.max() > self.outer_radius * (1 + tol):
            raise InvalidBody("certified radii violated on the evaluation grid")

    def reflected(self):
        """-K; reflecting the result again returns this very object."""
        mirror = self.__dict__.get("_mirror")
        if mirror is None:
            mirror = self._make_reflection()
            mirror._mirror = self
            self._mirror = mirror
        return mirror

    def _make_reflection(self):
        return Reflected(self)

    def spec(self):
        raise NotImplementedError(f"{type(self).__name__} has no file representation")

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class Ball(StarBody):
    smoothness = "Cinf"
    convex = True
    kind = "ball"

    def __init__(self, center, radius=1.0):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        super().__init__(len(center))
        self.center = center
        self.radius = float(radius)
        if not np.linalg.norm(center) < self.radius:
            raise InvalidBody("ball must contain the origin strictly")

    @classmethod
    def centered(cls, dim, radius=1.0):
        return cls(np.zeros(dim), radius)

    def _radial(self, xi):
        b = xi @ self.center
        c2 = self.center @ self.center
        return b + np.sqrt(b * b - c2 + self.radius**2)

    def ray_exit(self, p, d):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        d = np.atleast_2d(np.asarray(d, dtype=float))
        q = p - self.center
        qd = np.einsum("ij,ij->i", *np.broadcast_arrays(q, d))
        disc = qd * qd - np.einsum("ij,ij->i", q, q) + self.radius**2
        s = -qd + np.sqrt(np.maximum(disc, 0.0))
        return np.where(np.einsum("ij,ij->i", q, q) < self.radius**2, s, 0.0)

    def _support(self, xi):
        return xi @ self.center + self.radius

    def _support_point(self, xi):
        return self.center + self.radius * xi

    @cached_property
    def _radii(self):
        c = float(np.linalg.norm(self.center))
        return self.radius - c, self.radius + c

    def _make_reflection(self):
        return Ball(-self.center, self.radius)

    def spec(self):
        return {"type": "ball", "dim": self.dim, "parameters": {"center": self.center.tolist(), "radius": self.radius}}


class Ellipsoid(StarBody):
    smoothness = "Cinf"
    convex = True
    kind = "ellipsoid"

    def __init__(self, center, semi_axes, rotation=None):
        semi_axes = np.asarray(semi_axes, dtype=float)
        super().__init__(len(semi_axes))
        n = self.dim
        self.center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
        if self.center.shape != (n,):
            raise InvalidBody("center and semi_axes must have the same length")
        if np.any(semi_axes <= 0):
            raise InvalidBody("semi-axes must be positive")
        rot = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
        if rot.shape != (n, n) or np.abs(rot.T @ rot - np.eye(n)).max() > 1e-10:
            raise InvalidBody("rotation must be an orthogonal matrix")
        self.semi_axes = semi_axes
        self.rotation = rot
        self._M = rot * semi_axes  # R diag(a)
        self._Minv = (rot / semi_axes).T  # diag(1/a) R^T
        self._v = self._Minv @ self.center
        if not self._v @ self._v < 1.0:
            raise InvalidBody("ellipsoid must contain the origin strictly")

    def _radial(self, xi):
        u = xi @ self._Minv.T
        A = np.einsum("ij,ij->i", u, u)
        B = u @ self._v
        C = self._v @ self._v - 1.0
        return (B + np.sqrt(B * B - A * C)) / A

    def ray_exit(self, p, d):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        d = np.atleast_2d(np.asarray(d, dtype=float))
        p, d = np.broadcast_arrays(p, d)
        u = d @ self._Minv.T
        w = (p - self.center) @ self._Minv.T
        uu = np.einsum("ij,ij->i", u, u)
        wu = np.einsum("ij,ij->i", w, u)
        ww = np.einsum("ij,ij->i", w, w)
        s = (-wu + np.sqrt(np.maximum(wu * wu - uu * (ww - 1.0), 0.0))) / uu
        return np.where(ww < 1.0, s, 0.0)

    def gauge(self, x):
        # closed form is only simple for a centred ellipsoid
        if np.any(self.center):
            return super().gauge(x)
        x = np.asarray(x, dtype=float)
        out = np.linalg.norm(x @ self._Minv.T, axis=-1)
        return float(out) if out.ndim == 0 else out

    def _support(self, xi):
        return xi @ self.center + np.linalg.norm(xi @ self._M, axis=1)

    def _support_point(self, xi):
        y = xi @ self._M
        return self.center + (y / np.linalg.norm(y, axis=1, keepdims=True)) @ self._M.T

    @cached_property
    def _radii(self):
        if not np.any(self.center):
            return float(self.semi_axes.min()), float(self.semi_axes.max())
        return self._extreme_radii()

    def _make_reflection(self):
        return Ellipsoid(-self.center, self.semi_axes, self.rotation)

    def spec(self):
        return {
            "type": "ellipsoid",
            "dim": self.dim,
            "parameters": {
                "center": self.center.tolist(),
                "semi_axes": self.semi_axes.tolist(),
                "rotation": self.rotation.tolist(),
            },
        }


VERTEX_ENUM_MAX_DIM = 4
VERTEX_ENUM_MAX_FACETS = 64


class Polytope(StarBody):
    """Intersection of halfspaces <a_i, x> <= b_i with unit normals and b_i > 0."""

    smoothness = "polytope"
    convex = True
    kind = "polytope"

    def __init__(self, normals, offsets):
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float).ravel()
        super().__init__(normals.shape[1])
        if len(normals) != len(offsets):
            raise InvalidBody("one offset per normal is required")
        lengths = np.linalg.norm(normals, axis=1)
        if np.any(lengths == 0):
            raise InvalidBody("zero normal vector")
        self.normals = normals / lengths[:, None]
        self.offsets = offsets / lengths
        if np.any(self.offsets <= 0):
            raise InvalidBody("every offset must be positive (origin interior)")
        self._check_bounded()

    def _check_bounded(self):
        n = self.dim
        for k in range(n):
            for sgn in (1.0, -1.0):
                c = np.zeros(n)
                c[k] = -sgn
                res = linprog(c, A_ub=self.normals, b_ub=self.offsets, bounds=[(None, None)] * n, method="highs")
                if res.status == 3:
                    raise InvalidBody("polytope is unbounded")

    def _radial(self, xi):
        den = xi @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, self.offsets / den, np.inf)
        out = ratio.min(axis=1)
        if not np.all(np.isfinite(out)):
            raise InvalidBody("no facet faces some direction; origin is not interior")
        return out

    def gauge(self, x):
        x = np.asarray(x, dtype=float)
        out = np.maximum((x @ self.normals.T / self.offsets).max(axis=-1), 0.0)
        return float(out) if out.ndim == 0 else out

    def ray_exit(self, p, d):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        d = np.atleast_2d(np.asarray(d, dtype=float))
        den = d @ self.normals.T
        num = self.offsets - p @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(den > 0, num / den, np.inf)
        return np.maximum(ratio.min(axis=1), 0.0)

    @cached_property
    def vertices(self):
        """Vertex array, or None when enumeration is out of the supported range."""
        n, m = self.dim, len(self.offsets)
        if n > VERTEX_ENUM_MAX_DIM or m > VERTEX_ENUM_MAX_FACETS:
            return None
        found = []
        combos = np.array(list(combinations(range(m), n)), dtype=np.intp)
        for chunk in np.array_split(combos, max(1, len(combos) // 50_000)):
            A = self.normals[chunk]
            b = self.offsets[chunk]
            ok = np.abs(np.linalg.det(A)) > 1e-12
            if not ok.any():
                continue
            x = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
            feas = (x @ self.normals.T <= self.offsets * (1 + 1e-10) + 1e-12).all(axis=1)
            found.append(x[feas])
        verts = np.concatenate(found) if found else np.empty((0, n))
        if len(verts):
            scale = max(1.0, float(np.abs(verts).max()))
            key = np.round(verts / scale, 9)
            _, keep = np.unique(key, axis=0, return_index=True)
            verts = verts[np.sort(keep)]
        verts.setflags(write=False)
        return verts

    def _lp_support(self, xi):
        vals, pts = [], []
        for row in xi:
            res = linprog(-row, A_ub=self.normals, b_ub=self.offsets, bounds=[(None, None)] * self.dim, method="highs")
            if res.status != 0:
                raise InvalidBody("support LP failed; polytope may be unbounded")
            vals.append(-res.fun)
            pts.append(res.x)
        return np.array(vals), np.array(pts)

    def _support(self, xi):
        V = self.vertices
        if V is None:
            return self._lp_support(xi)[0]
        return (xi @ V.T).max(axis=1)

    def _support_point(self, xi):
        V = self.vertices
        if V is None:
            return self._lp_support(xi)[1]
        return V[np.argmax(xi @ V.T, axis=1)]

    @cached_property
    def _radii(self):
        r = float(self.offsets.min())
        V = self.vertices
        if V is None:
            return r, self._extreme_radii()[1]
        return r, float(np.linalg.norm(V, axis=1).max())

    def _make_reflection(self):
        return Polytope(-self.normals, self.offsets)

    def spec(self):
        return {
            "type": "polytope",
            "dim": self.dim,
            "parameters": {"normals": self.normals.tolist(), "offsets": self.offsets.tolist()},
        }


def cube(dim, half_width=1.0, center=None):
    """Axis-parallel cube [-h, h]^n translated by ``center``."""
    c = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    eye = np.eye(dim)
    normals = np.vstack([eye, -eye])
    offsets = np.concatenate([half_width + c, half_width - c])
    return Polytope(normals, offsets)


def convexity_certificate(body, chords=10_000, slack=1e-9, seed=0):
    """Midpoint test on random chords between points of the body.

    Half of the chords join boundary points, the rest join random interior
    points. Returns (passed, worst gauge excess over 1).
    """
    rng = np.random.default_rng(seed)
    n = body.dim
    dirs = normalize(rng.standard_normal((2, chords, n)))
    scale = np.ones((2, chords))
    scale[:, chords // 2 :] = rng.uniform(0.0, 1.0, (2, chords - chords // 2))
    rho = body._radial(dirs.reshape(-1, n)).reshape(2, chords)
    pts = (rho * scale)[..., None] * dirs
    mid = 0.5 * (pts[0] + pts[1])
    excess = float(np.max(np.asarray(body.gauge(mid)) - 1.0))
    return excess <= slack, excess


class RadialSeries(StarBody):
    """rho(xi) = base + sum of c_{m,j} Y_{m,j}(xi) over a finite coefficient list.

    ``coefficients`` is a list of (degree, index, value) triples in the
    package's real orthonormal harmonic basis.
    """

    smoothness = "Cinf"
    kind = "radial_series"

    def __init__(self, dim, base, coefficients=(), certify=True, chords=10_000, seed=0):
        from ..harmonics import HarmonicExpansion, harmonic_dimension

        super().__init__(dim)
        self.base = float(base)
        self.coefficients = [(int(m), int(j), float(c)) for m, j, c in coefficients]
        if self.base <= 0:
            raise InvalidBody("base radius must be positive")
        L = max([m for m, _, _ in self.coefficients], default=0)
        blocks = [np.zeros(harmonic_dimension(dim, m)) for m in range(L + 1)]
        for m, j, c in self.coefficients:
            if not 0 <= j < len(blocks[m]):
                raise InvalidBody(f"harmonic index {j} out of range for degree {m}")
            blocks[m][j] += c
        self.expansion = HarmonicExpansion(dim, L, blocks)
        omega = sphere_area(dim)
        self.perturbation_bound = float(
            sum(abs(c) * np.sqrt(harmonic_dimension(dim, m) / omega) for m, _, c in self.coefficients)
        )
        if self.perturbation_bound >= self.base:
            lo, hi = self._extreme_radii()
            if lo <= 0:
                raise InvalidBody("perturbation sup-norm must stay below the base radius")
            self._certified = False
        else:
            self._certified = True
        self.convex = False
        self.convexity_excess = None
        if certify:
            self.convex, self.convexity_excess = convexity_certificate(self, chords=chords, seed=seed)

    def _radial(self, xi):
        return self.base + self.expansion.synthesize(xi)

    @cached_property
    def _radii(self):
        if self._certified:
            return self.base - self.perturbation_bound, self.base + self.perturbation_bound
        return self._extreme_radii()

    def spec(self):
        return {
            "type": "radial_series",
            "dim": self.dim,
            "parameters": {"base": self.base, "coefficients": [list(c) for c in self.coefficients]},
        }


class Reflected(StarBody):
    """-K, with rho_{-K}(xi) = rho_K(-xi)."""

    def __init__(self, body):
        super().__init__(body.dim)
        self.body = body
        self.smoothness = body.smoothness
        self.convex = body.convex
        self.kind = body.kind

    def _radial(self, xi):
        return self.body._radial(-xi)

    def gauge(self, x):
        return self.body.gauge(-np.asarray(x, dtype=float))

    def ray_exit(self, p, d):
        return self.body.ray_exit(-np.asarray(p, dtype=float), -np.asarray(d, dtype=float))

    def _support(self, xi):
        return self.body._support(-xi)

    def _support_point(self, xi):
        return -self.body._support_point(-xi)

    @property
    def _radii(self):
        return self.body.inner_radius, self.body.outer_radius

    def _make_reflection(self):
        return self.body

    def spec(self):
        return {"type": "reflect", "dim": self.dim, "parameters": {"body": self.body.spec()}}


class TabulatedStarBody(StarBody):
    """Radial values tabulated on a sphere grid.

    Queries on a node return the stored value; elsewhere the value is the
    inverse-square-distance average of the n+1 nearest nodes, so it always
    stays between the tabulated extremes.
    """

    kind = "tabulated"

    def __init__(self, quad: SphereQuadrature, values, smoothness="C0", convex=False, label=""):
        super().__init__(quad.dim)
        values = np.array(values, dtype=float)
        if values.shape != (len(quad),):
            raise InvalidBody("one value per quadrature node is required")
        if np.any(values <= 0) or not np.all(np.isfinite(values)):
            raise InvalidBody("tabulated radial values must be positive and finite")
        values.setflags(write=False)
        self.quad = quad
        self.values = values
        self.smoothness = smoothness
        self.convex = convex
        self.label = label
        self._tree = cKDTree(quad.nodes)

    def _radial(self, xi):
        k = min(self.dim + 1, len(self.values))
        dist, idx = self._tree.query(xi, k=k)
        exact = dist[:, 0] < 1e-13
        w = 1.0 / np.maximum(dist, 1e-150) ** 2
        out = (w * self.values[idx]).sum(axis=1) / w.sum(axis=1)
        out[exact] = self.values[idx[exact, 0]]
        return out

    def radial_on(self, quad):
        if quad is self.quad:
            return self.values
        return super().radial_on(quad)

    @cached_property
    def _radii(self):
        return float(self.values.min()), float(self.values.max())
