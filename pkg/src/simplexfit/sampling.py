"""Uniform random points from convex bodies.

Exact samplers exist for Ball, Cube, Ellipsoid, SimplexBody (closed forms)
and VPolytope up to dimension 8 (triangulation + volume-weighted simplex
choice); everything else runs a hit-and-run chain, with closed-form chords
for H-representation bodies and membership bisection as the last resort.

Streams: all parallel work derives independent generators from one master
seed via derive_seed(master, stream) = master XOR splitmix64(stream).
"""

import numpy as np

from . import kernels
from .bodies import (
    Ball,
    ConvexBody,
    Cube,
    Ellipsoid,
    FACET_CACHE_MAX_DIM,
    HPolytope,
    NoExactVolumeError,
    SimplexBody,
    TransformedBody,
    VPolytope,
    VPOLY_EXACT_MAX_DIM,
)

BURN_IN_FACTOR = 50        # burn_in = 50 n^2 steps
CHORD_BISECT_RTOL = 1e-10
CHORD_BISECT_MAX_ITER = 200

_MASK64 = (1 << 64) - 1


def splitmix64(i):
    """SplitMix64 mixer: maps a counter to a well-scrambled 64-bit word."""
    z = (int(i) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(master, stream):
    """Independent 64-bit seed for the given stream index."""
    return (int(master) & _MASK64) ^ splitmix64(stream)


def make_rng(master, stream=0):
    return np.random.default_rng(derive_seed(master, stream))


def default_burn_in(n):
    return BURN_IN_FACTOR * n * n


def default_thinning(n):
    return n * n


def _exact_capable(body):
    if isinstance(body, (Ball, Cube, Ellipsoid, SimplexBody)):
        return True
    if isinstance(body, VPolytope) and body.dim <= VPOLY_EXACT_MAX_DIM:
        return True
    if isinstance(body, TransformedBody):
        return _exact_capable(body.base)
    return False


def _hrep_of(body):
    """(A, b, start) H-representation and an interior start, or None."""
    if isinstance(body, HPolytope):
        center, inradius = body.chebyshev_center()
        return body.normals, body.offsets, center
    if isinstance(body, Cube):
        n = body.dim
        A = np.vstack([np.eye(n), -np.eye(n)])
        lo = body.center - body.half_width
        hi = body.center + body.half_width
        return A, np.concatenate([hi, -lo]), body.center.copy()
    if isinstance(body, SimplexBody):
        A, c = body.facets()
        return A, c, body.simplex.vertices.mean(axis=0)
    if isinstance(body, VPolytope) and body.dim <= FACET_CACHE_MAX_DIM:
        A, b = body.facets()
        return A, b, body.vertices.mean(axis=0)
    return None


def hrep_chord(A, b, x, d):
    """Closed-form chord {t : A(x + t d) <= b} through an interior point.

    Same arithmetic as the walk kernels; exposed for tests."""
    r = b - A @ x
    Ad = A @ d
    eps = 1e-13 * max(float(np.max(np.abs(Ad))), 1e-300)
    pos = Ad > eps
    neg = Ad < -eps
    t_hi = np.min(r[pos] / Ad[pos]) if np.any(pos) else np.inf
    t_lo = np.max(r[neg] / Ad[neg]) if np.any(neg) else -np.inf
    return float(t_lo), float(t_hi)


class SamplerHandle:
    """Stateful sampler bound to one body and one derived RNG stream.

    method: "auto" picks exact when available; "exact" requires it;
    "hit_and_run" forces the chain (useful for validating the chain against
    exact samplers).
    """

    def __init__(self, body, seed, method="auto", burn_in=None, thinning=None,
                 stream=0):
        if not isinstance(body, ConvexBody):
            raise TypeError("body must be a ConvexBody")
        self.body = body
        self.seed = int(seed)
        self.stream = int(stream)
        self.rng = make_rng(seed, stream)
        n = body.dim
        self.burn_in = default_burn_in(n) if burn_in is None else int(burn_in)
        self.thinning = default_thinning(n) if thinning is None else int(thinning)
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")

        if method == "auto":
            method = "exact" if _exact_capable(body) else "hit_and_run"
        if method == "exact" and not _exact_capable(body):
            raise NoExactVolumeError("no exact sampler for kind %r" % body.kind)
        if method not in ("exact", "hit_and_run"):
            raise ValueError("method must be auto/exact/hit_and_run")
        self.method = method

        self._inner = None
        self._hrep = None
        self._burned = False
        self.current_point = None
        if isinstance(body, TransformedBody):
            self._inner = SamplerHandle(body.base, seed, method=method,
                                        burn_in=burn_in, thinning=thinning,
                                        stream=stream)
            self.method = self._inner.method
            if self._inner.current_point is not None:
                self.current_point = body.affine.apply(self._inner.current_point)
        elif method == "hit_and_run":
            self._hrep = _hrep_of(body)
            if self._hrep is not None:
                self.current_point = np.array(self._hrep[2], dtype=np.float64)
            else:
                self.current_point = self._interior_point()

    def _interior_point(self):
        b = self.body
        if isinstance(b, (Ball, Ellipsoid)):
            return np.zeros(b.dim)
        if isinstance(b, Cube):
            return b.center.copy()
        if isinstance(b, VPolytope):
            return b.vertices.mean(axis=0)
        raise ValueError("no interior point rule for kind %r" % b.kind)

    # -- exact draws ---------------------------------------------------------

    def _draw_exact(self, count):
        b = self.body
        rng = self.rng
        if isinstance(b, TransformedBody):
            return b.affine.apply(self._inner._draw_exact(count))
        if isinstance(b, Ball):
            return _ball_points(rng, count, b.dim, b.radius)
        if isinstance(b, Cube):
            h = b.half_width
            return rng.random((count, b.dim)) * (2.0 * h) + (b.center - h)
        if isinstance(b, Ellipsoid):
            L = np.linalg.cholesky(b.shape)
            return _ball_points(rng, count, b.dim, 1.0) @ L.T
        if isinstance(b, SimplexBody):
            return _simplex_points(rng, count, b.simplex.vertices)
        if isinstance(b, VPolytope):
            sims, vols = b.triangulation()
            S = np.stack(sims)
            idx = rng.choice(len(sims), size=count, p=vols / vols.sum())
            E = rng.standard_exponential((count, b.dim + 1))
            W = E / E.sum(axis=1, keepdims=True)
            return np.einsum("mj,mjn->mn", W, S[idx])
        raise NoExactVolumeError("no exact sampler for kind %r" % b.kind)

    # -- hit-and-run ---------------------------------------------------------

    def _draw_hnr(self, count):
        if self._inner is not None:
            return self.body.affine.apply(self._inner._draw_hnr(count))
        n = self.body.dim
        burn = 0 if self._burned else self.burn_in
        steps = burn + self.thinning * count
        out = np.empty((count, n))
        directions = self.rng.standard_normal((steps, n))
        fractions = self.rng.random(steps)
        if self._hrep is not None:
            A, b, _ = self._hrep
            self.current_point = kernels.hnr_walk_hrep(
                A, b, self.current_point, directions, fractions, burn,
                self.thinning, out)
        else:
            self.current_point = _bisect_walk(
                self.body, self.current_point, directions, fractions, burn,
                self.thinning, out)
        self._burned = True
        return out

    def draw(self, count):
        """(count, n) array of (approximately) uniform points."""
        count = int(count)
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0:
            return np.empty((0, self.body.dim))
        if self.method == "exact":
            return self._draw_exact(count)
        return self._draw_hnr(count)


def _ball_points(rng, count, n, radius):
    g = rng.standard_normal((count, n))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / n)
    return g / norms * radii[:, None]


def _simplex_points(rng, count, vertices):
    n = vertices.shape[1]
    E = rng.standard_exponential((count, n + 1))
    W = E / E.sum(axis=1, keepdims=True)
    return W @ vertices


def _chord_endpoint_bisect(body, x, d, sign, scale):
    """Largest t >= 0 with x + sign*t*d inside, by growth then bisection."""
    step = scale
    hi = step
    grow = 0
    while body.contains(x + sign * hi * d) and grow < 90:
        hi *= 2.0
        grow += 1
    if grow >= 90:
        raise ValueError("unbounded chord: body is not bounded")
    lo = 0.0
    tol = CHORD_BISECT_RTOL * scale
    for _ in range(CHORD_BISECT_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if body.contains(x + sign * mid * d):
            lo = mid
        else:
            hi = mid
    return lo


def _bisect_walk(body, x0, directions, fractions, burn_in, thin, out):
    """Hit-and-run against a membership oracle only (slow fallback path)."""
    x = np.array(x0, dtype=np.float64, copy=True)
    scale = body.scale()
    emitted = 0
    for step in range(directions.shape[0]):
        d = directions[step]
        norm = np.linalg.norm(d)
        if norm == 0.0:
            continue
        d = d / norm
        t_hi = _chord_endpoint_bisect(body, x, d, 1.0, scale)
        t_lo = -_chord_endpoint_bisect(body, x, d, -1.0, scale)
        x = x + (t_lo + fractions[step] * (t_hi - t_lo)) * d
        k = step + 1 - burn_in
        if k > 0 and k % thin == 0 and emitted < out.shape[0]:
            out[emitted] = x
            emitted += 1
    return x
