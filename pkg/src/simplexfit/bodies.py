"""Convex-body representations with exact geometry where closed forms exist.

Kinds: Ball, Cube, Ellipsoid, VPolytope, HPolytope, SimplexBody, plus the
TransformedBody wrapper (affine image of another body). Each kind exposes
membership, support, scale, and exact volume/moments when available; polar
duality is implemented kind-to-kind. Simplices get their own value type with
determinant volume, barycenter, facet enumeration, and polar computation.

All tolerances are relative to a per-body scale (the maximum coordinate
magnitude over the body), since affine images vary wildly in magnitude.
"""

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection
from scipy.special import gammaln

MEMBERSHIP_RTOL = 1e-10
CONTAINS_RTOL = 1e-9
POLAR_MARGIN_RTOL = 1e-8
DEGENERACY_RTOL = 1e-14
FACET_CACHE_MAX_DIM = 6
VPOLY_EXACT_MAX_DIM = 8
HPOLY_CONVERT_MAX_DIM = 6


class GeometryError(Exception):
    """Base class for geometric failure modes."""


class DegenerateSimplexError(GeometryError):
    """Simplex determinant below the scale-aware degeneracy threshold."""


class PolarUnboundedError(GeometryError):
    """Polar requested for a body without 0 strictly interior."""


class NoExactVolumeError(GeometryError):
    """No closed-form or triangulation volume for this kind/dimension."""


class NotABodyError(GeometryError):
    """The set is unbounded or empty (not a convex body)."""


def ball_log_volume(n, radius=1.0):
    return 0.5 * n * np.log(np.pi) - gammaln(0.5 * n + 1.0) + n * np.log(radius)


def ball_volume(n, radius=1.0):
    """Volume of the Euclidean ball of the given radius in R^n."""
    return float(np.exp(ball_log_volume(n, radius)))


# ---------------------------------------------------------------------------
# Simplex
# ---------------------------------------------------------------------------


class Simplex:
    """n+1 vertices in R^n, stored as rows. Degeneracy is checked by the
    operations that require it, not at construction."""

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=np.float64)
        if V.ndim != 2 or V.shape[0] != V.shape[1] + 1:
            raise ValueError("simplex needs n+1 vertices in R^n, got shape %s" % (V.shape,))
        self.vertices = V

    @property
    def dim(self):
        return self.vertices.shape[1]

    def scale(self):
        return float(np.max(np.abs(self.vertices))) or 1.0

    def __repr__(self):
        return "Simplex(n=%d)" % self.dim


def _edge_matrix(s):
    return s.vertices[1:] - s.vertices[0]


def _max_edge_length(s):
    V = s.vertices
    diffs = V[:, None, :] - V[None, :, :]
    return float(np.sqrt((diffs ** 2).sum(axis=-1)).max())


def simplex_volume(s):
    """|det(v_1 - v_0, ..., v_n - v_0)| / n!  Raises DegenerateSimplexError
    when |det| falls below DEGENERACY_RTOL * (max edge length)^n."""
    n = s.dim
    sign, logabsdet = np.linalg.slogdet(_edge_matrix(s))
    edge = _max_edge_length(s)
    if edge == 0.0:
        raise DegenerateSimplexError("all vertices coincide")
    threshold = np.log(DEGENERACY_RTOL) + n * np.log(edge)
    if sign == 0 or logabsdet < threshold:
        raise DegenerateSimplexError("simplex determinant below degeneracy threshold")
    return float(np.exp(logabsdet - gammaln(n + 1.0)))


def simplex_barycenter(s):
    """Arithmetic mean of the n+1 vertices."""
    return s.vertices.mean(axis=0)


def simplex_facets(s):
    """Outward facet representation (A, c): the simplex is {x : A x <= c},
    rows unit-normalized, row j opposite vertex j."""
    V = s.vertices
    n = s.dim
    A = np.empty((n + 1, n))
    c = np.empty(n + 1)
    for j in range(n + 1):
        face = np.delete(V, j, axis=0)
        m = face.mean(axis=0)
        # normal spans the null space of the centered face
        _, sv, vt = np.linalg.svd(face - m)
        a = vt[-1]
        if a @ (V[j] - m) > 0:
            a = -a
        A[j] = a
        c[j] = a @ m
    return A, c


def simplex_moments(s):
    """Exact (barycenter, covariance) of the uniform distribution on s."""
    V = s.vertices
    n = s.dim
    c = V.mean(axis=0)
    second = (V.T @ V + np.outer(V.sum(axis=0), V.sum(axis=0))) / ((n + 1.0) * (n + 2.0))
    return c, second - np.outer(c, c)


def polar_simplex(s):
    """Polar of a simplex with 0 strictly interior: vertex w_j solves
    <w_j, v_i> = 1 for all i != j. Vertex order follows the omitted index,
    so the bipolar returns vertices in the original order."""
    V = s.vertices
    n = s.dim
    scale = s.scale()
    simplex_volume(s)  # degenerate input surfaces as DegenerateSimplexError
    W = np.empty_like(V)
    ones = np.ones(n)
    for j in range(n + 1):
        M = np.delete(V, j, axis=0)
        try:
            W[j] = np.linalg.solve(M, ones)
        except np.linalg.LinAlgError:
            # non-degenerate simplex, singular facet system: the facet
            # hyperplane passes through 0, the polar vertex is at infinity
            raise PolarUnboundedError("facet hyperplane through the origin")
    inner = np.einsum("ij,ij->i", W, V)  # <w_j, v_j>
    if np.any(inner >= 1.0):
        raise PolarUnboundedError("0 is not interior to the simplex")
    dist = 1.0 / np.linalg.norm(W, axis=1)  # distance from 0 to facet j
    if np.min(dist) < POLAR_MARGIN_RTOL * scale:
        raise PolarUnboundedError("0 is interior without the required margin")
    return Simplex(W)


def mahler_centered_simplex(n):
    """(n+1)^{n+1} / (n!)^2, evaluated in the log domain."""
    return float(np.exp((n + 1.0) * np.log(n + 1.0) - 2.0 * gammaln(n + 1.0)))


# ---------------------------------------------------------------------------
# Convex bodies
# ---------------------------------------------------------------------------


class ConvexBody:
    """Base class: membership, support, per-body scale, and exact geometry
    where the kind provides it."""

    kind = "abstract"

    def __init__(self, dim):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = int(dim)

    # -- required interface -------------------------------------------------
    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        raise NotImplementedError

    def support(self, u):
        raise NotImplementedError

    def scale(self):
        raise NotImplementedError

    # -- optional exact geometry --------------------------------------------
    def exact_volume(self):
        raise NoExactVolumeError("no exact volume for kind %r" % self.kind)

    def exact_moments(self):
        """(barycenter, covariance) in closed form, or NoExactVolumeError."""
        raise NoExactVolumeError("no exact moments for kind %r" % self.kind)

    def polar(self):
        raise PolarUnboundedError("no polar mapping for kind %r" % self.kind)

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        return np.array([self.contains(x, rtol=rtol) for x in X], dtype=bool)

    def to_spec(self):
        raise NotImplementedError

    def __repr__(self):
        return "%s(n=%d)" % (type(self).__name__, self.dim)


def _check_vector(x, dim):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (dim,):
        raise ValueError("expected vector of dimension %d, got shape %s" % (dim, x.shape))
    return x


class Ball(ConvexBody):
    kind = "ball"

    def __init__(self, radius, dim):
        super().__init__(dim)
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        return float(np.linalg.norm(x)) <= self.radius * (1.0 + rtol)

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        return np.linalg.norm(X, axis=-1) <= self.radius * (1.0 + rtol)

    def support(self, u):
        u = _check_vector(u, self.dim)
        return self.radius * float(np.linalg.norm(u))

    def scale(self):
        return self.radius

    def exact_volume(self):
        return ball_volume(self.dim, self.radius)

    def exact_moments(self):
        n = self.dim
        return np.zeros(n), (self.radius ** 2 / (n + 2.0)) * np.eye(n)

    def polar(self):
        return Ball(1.0 / self.radius, self.dim)

    def to_spec(self):
        return {"kind": "ball", "dim": self.dim, "radius": self.radius}


class Cube(ConvexBody):
    """Axis-aligned cube: [-h, h]^n when centered, else [0, 2h]^n."""

    kind = "cube"

    def __init__(self, half_width, dim, centered=True):
        super().__init__(dim)
        if half_width <= 0:
            raise ValueError("half_width must be positive")
        self.half_width = float(half_width)
        self.centered = bool(centered)

    @property
    def center(self):
        h = self.half_width
        return np.zeros(self.dim) if self.centered else np.full(self.dim, h)

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        h = self.half_width
        return bool(np.all(np.abs(x - self.center) <= h * (1.0 + rtol)))

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        h = self.half_width
        return np.all(np.abs(X - self.center) <= h * (1.0 + rtol), axis=-1)

    def support(self, u):
        u = _check_vector(u, self.dim)
        return float(self.center @ u + self.half_width * np.abs(u).sum())

    def scale(self):
        return self.half_width if self.centered else 2.0 * self.half_width

    def exact_volume(self):
        return float((2.0 * self.half_width) ** self.dim)

    def exact_moments(self):
        n = self.dim
        return self.center, (self.half_width ** 2 / 3.0) * np.eye(n)

    def polar(self):
        if not self.centered:
            raise PolarUnboundedError("0 is not interior to the non-centered cube")
        # [-h, h]^n polar is the cross-polytope with vertices +-e_i / h
        eye = np.eye(self.dim) / self.half_width
        return VPolytope(np.vstack([eye, -eye]))

    def to_spec(self):
        return {"kind": "cube", "dim": self.dim, "half_width": self.half_width,
                "centered": self.centered}


class Ellipsoid(ConvexBody):
    """{x : x^T M^{-1} x <= 1} for SPD shape matrix M (centered at 0)."""

    kind = "ellipsoid"

    def __init__(self, shape):
        M = np.asarray(shape, dtype=np.float64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("shape matrix must be square")
        if not np.allclose(M, M.T, rtol=1e-10, atol=1e-12 * np.abs(M).max()):
            raise ValueError("shape matrix must be symmetric")
        super().__init__(M.shape[0])
        eigvals = np.linalg.eigvalsh(M)
        if eigvals.min() <= 0:
            raise ValueError("shape matrix must be positive definite")
        self.shape = M
        self._inv = np.linalg.inv(M)

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        return float(x @ self._inv @ x) <= 1.0 + 2.0 * rtol

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        q = np.einsum("...i,ij,...j->...", X, self._inv, X)
        return q <= 1.0 + 2.0 * rtol

    def support(self, u):
        u = _check_vector(u, self.dim)
        return float(np.sqrt(u @ self.shape @ u))

    def scale(self):
        return float(np.sqrt(np.diag(self.shape).max()))

    def exact_volume(self):
        sign, logdet = np.linalg.slogdet(self.shape)
        return float(np.exp(ball_log_volume(self.dim) + 0.5 * logdet))

    def exact_moments(self):
        n = self.dim
        return np.zeros(n), self.shape / (n + 2.0)

    def polar(self):
        return Ellipsoid(self._inv)

    def to_spec(self):
        return {"kind": "ellipsoid", "dim": self.dim, "shape": self.shape.tolist()}


class VPolytope(ConvexBody):
    """Convex hull of a point list (rows). The list may contain redundant
    (non-vertex) points; full dimensionality is required."""

    kind = "vpolytope"

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=np.float64)
        if V.ndim != 2:
            raise ValueError("vertices must be an (m, n) array")
        m, n = V.shape
        if n < 2:
            raise ValueError("VPolytope requires dimension >= 2")
        if m < n + 1:
            raise ValueError("need at least n+1 vertices for a full-dimensional body")
        rank = np.linalg.matrix_rank(V - V[0], tol=1e-10 * max(1.0, np.abs(V).max()))
        if rank < n:
            raise ValueError("vertex set is not full-dimensional")
        super().__init__(n)
        self.vertices = V
        self._hull = None
        self._tri = None

    def hull(self):
        if self._hull is None:
            self._hull = ConvexHull(self.vertices)
        return self._hull

    def facets(self):
        """(A, b) with the body equal to {x : A x <= b}; rows unit-normalized."""
        eq = self.hull().equations
        return eq[:, :-1], -eq[:, -1]

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        if self.dim <= FACET_CACHE_MAX_DIM:
            A, b = self.facets()
            return bool(np.all(A @ x <= b + rtol * self.scale()))
        return self._contains_lp(x, rtol)

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        if self.dim <= FACET_CACHE_MAX_DIM:
            A, b = self.facets()
            return np.all(X @ A.T <= b + rtol * self.scale(), axis=-1)
        return super().contains_many(X, rtol=rtol)

    def _contains_lp(self, x, rtol):
        # min s  s.t.  V^T lam - x <= s,  x - V^T lam <= s,  sum lam = 1, lam >= 0
        m, n = self.vertices.shape
        c = np.zeros(m + 1)
        c[-1] = 1.0
        Vt = self.vertices.T
        A_ub = np.block([[Vt, -np.ones((n, 1))], [-Vt, -np.ones((n, 1))]])
        b_ub = np.concatenate([x, -x])
        A_eq = np.zeros((1, m + 1))
        A_eq[0, :m] = 1.0
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                      bounds=[(0, None)] * m + [(0, None)], method="highs")
        if not res.success:
            raise NotABodyError("membership LP failed: %s" % res.message)
        return float(res.fun) <= rtol * self.scale()

    def support(self, u):
        u = _check_vector(u, self.dim)
        return float(np.max(self.vertices @ u))

    def scale(self):
        return float(np.max(np.abs(self.vertices))) or 1.0

    def triangulation(self):
        """Star decomposition from the point centroid: list of (n+1, n) vertex
        arrays whose simplices tile the hull, with their volumes."""
        if self._tri is None:
            if self.dim > VPOLY_EXACT_MAX_DIM:
                raise NoExactVolumeError("triangulation limited to n <= %d"
                                         % VPOLY_EXACT_MAX_DIM)
            hull = self.hull()
            center = self.vertices.mean(axis=0)
            sims, vols = [], []
            for facet in hull.simplices:
                W = np.vstack([center[None, :], self.vertices[facet]])
                sign, logdet = np.linalg.slogdet(W[1:] - W[0])
                if sign == 0:
                    continue
                vol = np.exp(logdet - gammaln(self.dim + 1.0))
                if vol > 0:
                    sims.append(W)
                    vols.append(vol)
            self._tri = (sims, np.array(vols))
        return self._tri

    def exact_volume(self):
        sims, vols = self.triangulation()
        return float(vols.sum())

    def exact_moments(self):
        sims, vols = self.triangulation()
        n = self.dim
        total = vols.sum()
        bar = np.zeros(n)
        second = np.zeros((n, n))
        for W, vol in zip(sims, vols):
            c = W.mean(axis=0)
            bar += vol * c
            second += vol * (W.T @ W + np.outer(W.sum(axis=0), W.sum(axis=0))) \
                / ((n + 1.0) * (n + 2.0))
        bar /= total
        second /= total
        return bar, second - np.outer(bar, bar)

    def _interior_margin(self):
        A, b = self.facets()
        return float(np.min(b))  # rows are unit-normalized

    def polar(self):
        if self.dim > VPOLY_EXACT_MAX_DIM:
            raise PolarUnboundedError("interior check needs facets (n <= %d)"
                                      % VPOLY_EXACT_MAX_DIM)
        if self._interior_margin() < POLAR_MARGIN_RTOL * self.scale():
            raise PolarUnboundedError("0 is not strictly interior")
        return HPolytope(self.vertices, np.ones(len(self.vertices)))

    def to_spec(self):
        return {"kind": "vpolytope", "dim": self.dim, "vertices": self.vertices.tolist()}


class HPolytope(ConvexBody):
    """{x : A x <= b}. Rows are kept exactly as given (polar round trips
    depend on it); tolerances account for row norms."""

    kind = "hpolytope"

    def __init__(self, normals, offsets):
        A = np.asarray(normals, dtype=np.float64)
        b = np.asarray(offsets, dtype=np.float64)
        if A.ndim != 2 or b.shape != (A.shape[0],):
            raise ValueError("normals (m, n) and offsets (m,) must match")
        super().__init__(A.shape[1])
        self.normals = A
        self.offsets = b
        self._row_norms = np.linalg.norm(A, axis=1)
        if np.any(self._row_norms == 0):
            raise ValueError("zero normal row")
        self._scale = None
        self._cheb = None
        self._vrep = None

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        tol = rtol * (np.abs(self.offsets) + self._row_norms * self.scale())
        return bool(np.all(self.normals @ x <= self.offsets + tol))

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        tol = rtol * (np.abs(self.offsets) + self._row_norms * self.scale())
        return np.all(X @ self.normals.T <= self.offsets + tol, axis=-1)

    def support(self, u):
        u = _check_vector(u, self.dim)
        res = linprog(-u, A_ub=self.normals, b_ub=self.offsets,
                      bounds=[(None, None)] * self.dim, method="highs")
        if res.status == 3:
            raise NotABodyError("support LP unbounded: the polyhedron is not a body")
        if not res.success:
            raise NotABodyError("support LP failed: %s" % res.message)
        return float(-res.fun)

    def scale(self):
        if self._scale is None:
            worst = 0.0
            for i in range(self.dim):
                e = np.zeros(self.dim)
                e[i] = 1.0
                worst = max(worst, abs(self.support(e)), abs(self.support(-e)))
            self._scale = worst or 1.0
        return self._scale

    def chebyshev_center(self):
        """(center, inradius) of the largest inscribed ball."""
        if self._cheb is None:
            m, n = self.normals.shape
            c = np.zeros(n + 1)
            c[-1] = -1.0
            A_ub = np.hstack([self.normals, self._row_norms[:, None]])
            res = linprog(c, A_ub=A_ub, b_ub=self.offsets,
                          bounds=[(None, None)] * n + [(0, None)], method="highs")
            if not res.success:
                raise NotABodyError("Chebyshev LP failed: %s" % res.message)
            self._cheb = (res.x[:n], float(res.x[n]))
        return self._cheb

    def to_vpolytope(self):
        if self._vrep is None:
            if self.dim > HPOLY_CONVERT_MAX_DIM:
                raise NoExactVolumeError("H-to-V conversion limited to n <= %d"
                                         % HPOLY_CONVERT_MAX_DIM)
            center, inradius = self.chebyshev_center()
            if inradius <= 0:
                raise NotABodyError("polyhedron has empty interior")
            halfspaces = np.hstack([self.normals, -self.offsets[:, None]])
            hs = HalfspaceIntersection(halfspaces, center)
            self._vrep = VPolytope(hs.intersections)
        return self._vrep

    def exact_volume(self):
        return self.to_vpolytope().exact_volume()

    def exact_moments(self):
        return self.to_vpolytope().exact_moments()

    def polar(self):
        margin = self.offsets / self._row_norms
        if np.min(margin) < POLAR_MARGIN_RTOL * self.scale():
            raise PolarUnboundedError("0 is not strictly interior")
        return VPolytope(self.normals / self.offsets[:, None])

    def to_spec(self):
        return {"kind": "hpolytope", "dim": self.dim,
                "normals": self.normals.tolist(), "offsets": self.offsets.tolist()}


class SimplexBody(ConvexBody):
    kind = "simplex"

    def __init__(self, simplex):
        if not isinstance(simplex, Simplex):
            simplex = Simplex(simplex)
        super().__init__(simplex.dim)
        self.simplex = simplex
        self._facets = None

    def facets(self):
        if self._facets is None:
            self._facets = simplex_facets(self.simplex)
        return self._facets

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        x = _check_vector(x, self.dim)
        A, c = self.facets()
        return bool(np.all(A @ x <= c + rtol * self.scale()))

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        X = np.asarray(X, dtype=np.float64)
        A, c = self.facets()
        return np.all(X @ A.T <= c + rtol * self.scale(), axis=-1)

    def support(self, u):
        u = _check_vector(u, self.dim)
        return float(np.max(self.simplex.vertices @ u))

    def scale(self):
        return self.simplex.scale()

    def exact_volume(self):
        return simplex_volume(self.simplex)

    def exact_moments(self):
        return simplex_moments(self.simplex)

    def polar(self):
        return SimplexBody(polar_simplex(self.simplex))

    def to_spec(self):
        return {"kind": "simplex", "dim": self.dim,
                "vertices": self.simplex.vertices.tolist()}


class AffineMap:
    """x -> linear @ x + shift with invertible linear part."""

    def __init__(self, linear, shift):
        L = np.asarray(linear, dtype=np.float64)
        t = np.asarray(shift, dtype=np.float64)
        if L.ndim != 2 or L.shape[0] != L.shape[1] or t.shape != (L.shape[0],):
            raise ValueError("linear must be (n, n) and shift (n,)")
        sign, logdet = np.linalg.slogdet(L)
        if sign == 0:
            raise ValueError("linear part is singular")
        self.linear = L
        self.shift = t
        self._logabsdet = float(logdet)

    @property
    def dim(self):
        return self.linear.shape[0]

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        return x @ self.linear.T + self.shift

    def inverse(self):
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.shift)

    def compose(self, other):
        """self after other: x -> self(other(x))."""
        return AffineMap(self.linear @ other.linear,
                         self.linear @ other.shift + self.shift)

    def abs_det(self):
        return float(np.exp(self._logabsdet))

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n), np.zeros(n))


class TransformedBody(ConvexBody):
    """Affine image map(base) of another body; membership and support pull
    back through the map exactly."""

    kind = "image"

    def __init__(self, base, affine):
        if affine.dim != base.dim:
            raise ValueError("map and body dimensions differ")
        super().__init__(base.dim)
        self.base = base
        self.affine = affine
        self._inverse = affine.inverse()
        self._scale = None

    def contains(self, x, rtol=MEMBERSHIP_RTOL):
        return self.base.contains(self._inverse.apply(_check_vector(x, self.dim)),
                                  rtol=rtol)

    def contains_many(self, X, rtol=MEMBERSHIP_RTOL):
        return self.base.contains_many(self._inverse.apply(X), rtol=rtol)

    def support(self, u):
        u = _check_vector(u, self.dim)
        return float(self.affine.shift @ u) + self.base.support(self.affine.linear.T @ u)

    def scale(self):
        if self._scale is None:
            worst = 0.0
            for i in range(self.dim):
                e = np.zeros(self.dim)
                e[i] = 1.0
                worst = max(worst, abs(self.support(e)), abs(self.support(-e)))
            self._scale = worst or 1.0
        return self._scale

    def exact_volume(self):
        return self.affine.abs_det() * self.base.exact_volume()

    def exact_moments(self):
        bar, cov = self.base.exact_moments()
        L = self.affine.linear
        return self.affine.apply(bar), L @ cov @ L.T


# ---------------------------------------------------------------------------
# Operation-style wrappers and helpers
# ---------------------------------------------------------------------------


def membership(k, x, rtol=MEMBERSHIP_RTOL):
    """True iff x is in k; the boundary counts as inside at relative tolerance."""
    return k.contains(x, rtol=rtol)


def support(k, u):
    """h_k(u) = max over x in k of <x, u>."""
    return k.support(u)


def exact_volume(k):
    return k.exact_volume()


def polar_body(k):
    """The polar {x : <x, y> <= 1 for all y in k}; requires 0 strictly interior."""
    return k.polar()


def simplex_contains_body(s, k):
    """True iff k lies inside s, certified by comparing the body's support
    against every facet offset of the simplex."""
    A, c = simplex_facets(s)
    tol = CONTAINS_RTOL * max(s.scale(), k.scale())
    return all(k.support(A[j]) <= c[j] + tol for j in range(len(c)))


def translate_body(k, t):
    """The body k + t, staying within the representable kinds."""
    t = _check_vector(t, k.dim)
    if not np.any(t):
        return k
    if isinstance(k, VPolytope):
        return VPolytope(k.vertices + t)
    if isinstance(k, HPolytope):
        return HPolytope(k.normals, k.offsets + k.normals @ t)
    if isinstance(k, SimplexBody):
        return SimplexBody(Simplex(k.simplex.vertices + t))
    if isinstance(k, Cube):
        n = k.dim
        A = np.vstack([np.eye(n), -np.eye(n)])
        lo = k.center - k.half_width + t
        hi = k.center + k.half_width + t
        return HPolytope(A, np.concatenate([hi, -lo]))
    if isinstance(k, TransformedBody):
        return TransformedBody(k.base, AffineMap(k.affine.linear, k.affine.shift + t))
    raise ValueError("translation not representable for kind %r" % k.kind)


def support_box(k):
    """Exact axis-aligned bounding box (lo, hi) from 2n support evaluations."""
    n = k.dim
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        hi[i] = k.support(e)
        lo[i] = -k.support(-e)
    return lo, hi


def body_from_spec(spec):
    """Build a body from the JSON specification dict."""
    kind = spec["kind"]
    if kind == "ball":
        return Ball(spec["radius"], spec["dim"])
    if kind == "cube":
        return Cube(spec["half_width"], spec["dim"], centered=spec.get("centered", True))
    if kind == "ellipsoid":
        return Ellipsoid(np.array(spec["shape"], dtype=np.float64))
    if kind == "vpolytope":
        return VPolytope(np.array(spec["vertices"], dtype=np.float64))
    if kind == "hpolytope":
        return HPolytope(np.array(spec["normals"], dtype=np.float64),
                         np.array(spec["offsets"], dtype=np.float64))
    if kind == "simplex":
        return SimplexBody(Simplex(np.array(spec["vertices"], dtype=np.float64)))
    raise ValueError("unknown body kind %r" % kind)
