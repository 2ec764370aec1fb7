"""Reference oracles, the body corpus, and the experiment sweep.

The closed-form references (ball and cube extremal simplices) are evaluated
in the log domain; the planar minimal enclosing triangle is a desk-scale
optimizer over support-line triangles used as a 2-D oracle.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .bodies import (
    Ball,
    Cube,
    GeometryError,
    HPolytope,
    NotABodyError,
    POLAR_MARGIN_RTOL,
    Simplex,
    SimplexBody,
    VPolytope,
    ball_log_volume,
    simplex_contains_body,
)
from .centered import (
    positive_lower_quantile,
    run_trials,
    tail_quantile,
    u_statistic,
    volume_statistic,
)
from .enclosing import enclose
from .isotropy import isotropic_transform
from .report import ExperimentReport
from .sampling import derive_seed, make_rng

logger = logging.getLogger(__name__)

TRIANGLE_GRID = 60
TRIANGLE_REFINE_ROUNDS = 6
TRIANGLE_GOLDEN_ITERS = 80
_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


def reference_ball(n):
    """Exact (vol_simplex, vol_ball, normalized_ratio) for the unit ball and
    its minimal (regular circumscribed) simplex."""
    if n < 1:
        raise ValueError("n must be >= 1")
    log_vol_s = 0.5 * (n + 1.0) * np.log(n + 1.0) + 0.5 * n * np.log(n) \
        - gammaln(n + 1.0)
    log_vol_b = ball_log_volume(n)
    normalized = float(np.exp((log_vol_s - log_vol_b) / n) / np.sqrt(n))
    return float(np.exp(log_vol_s)), float(np.exp(log_vol_b)), normalized


def reference_cube(n):
    """(n/(n!)^{1/n}, certified): the corner-simplex volume-ratio root for the
    unit cube, and the containment certificate for S(0, n e_1, ..., n e_n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = float(np.exp(np.log(n) - gammaln(n + 1.0) / n))
    corner = Simplex(np.vstack([np.zeros((1, n)), n * np.eye(n)]))
    if n >= 2:
        certified = simplex_contains_body(corner, Cube(0.5, n, centered=False))
    else:
        certified = True  # [0,1] inside [0,1]
    return bound, certified


# ---------------------------------------------------------------------------
# 2-D minimal enclosing triangle
# ---------------------------------------------------------------------------


@dataclass
class Polygon2D:
    """Strictly convex polygon, vertices counterclockwise."""

    vertices: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=np.float64)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 3:
            raise ValueError("polygon needs at least 3 planar vertices")
        e = np.roll(V, -1, axis=0) - V
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] \
            - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross <= 0):
            raise ValueError("vertices must be strictly convex counterclockwise")
        self.vertices = V

    @classmethod
    def from_points(cls, points):
        from scipy.spatial import ConvexHull

        points = np.asarray(points, dtype=np.float64)
        hull = ConvexHull(points)
        return cls(points[hull.vertices])  # qhull returns CCW order in 2-D

    def area(self):
        V = self.vertices
        W = np.roll(V, -1, axis=0)
        return 0.5 * float(np.abs(np.sum(V[:, 0] * W[:, 1] - W[:, 0] * V[:, 1])))


def _support_triangle(V, thetas):
    """Triangle bounded by the three polygon support lines with outward
    normal angles thetas (..., 3): returns (areas, corners)."""
    T = np.asarray(thetas, dtype=np.float64)
    N = np.stack([np.cos(T), np.sin(T)], axis=-1)        # (..., 3, 2)
    H = (N @ V.T).max(axis=-1)                            # support values
    P = np.empty(T.shape[:-1] + (3, 2))
    ok = np.ones(T.shape[:-1], dtype=bool)
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        det = N[..., j, 0] * N[..., k, 1] - N[..., j, 1] * N[..., k, 0]
        ok &= np.abs(det) > 1e-14
        d = np.where(det == 0, 1.0, det)
        P[..., i, 0] = (H[..., j] * N[..., k, 1] - H[..., k] * N[..., j, 1]) / d
        P[..., i, 1] = (N[..., j, 0] * H[..., k] - N[..., k, 0] * H[..., j]) / d
    e1 = P[..., 1, :] - P[..., 0, :]
    e2 = P[..., 2, :] - P[..., 0, :]
    area = 0.5 * np.abs(e1[..., 0] * e2[..., 1] - e1[..., 1] * e2[..., 0])
    # normals must positively span: corner i on the inner side of line i
    for i in range(3):
        s = (N[..., i, :] * P[..., i, :]).sum(axis=-1)
        ok &= s <= H[..., i] + 1e-9
    return np.where(ok, area, np.inf), P


def _golden_min(f, lo, hi, iters=TRIANGLE_GOLDEN_ITERS):
    a, b = float(lo), float(hi)
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def _min_triangle_flush(V, theta1):
    """Best support triangle with side 1 flush at angle theta1; the other two
    normals at theta1+a and theta1+a+b over the spanning domain
    {0 < a < pi, 0 < b < pi, a + b > pi}."""
    grid = np.linspace(0.02, np.pi - 0.02, TRIANGLE_GRID)
    aa, bb = np.meshgrid(grid, grid, indexing="ij")
    mask = aa + bb > np.pi + 0.02
    angles = np.stack([np.full_like(aa, theta1), theta1 + aa, theta1 + aa + bb],
                      axis=-1)
    areas, _ = _support_triangle(V, angles)
    areas = np.where(mask, areas, np.inf)
    i = np.unravel_index(int(np.argmin(areas)), areas.shape)
    a0, b0 = float(aa[i]), float(bb[i])

    def area_at(a, b):
        ar, _ = _support_triangle(V, np.array([theta1, theta1 + a, theta1 + a + b]))
        return float(ar)

    for _ in range(TRIANGLE_REFINE_ROUNDS):
        a0 = _golden_min(lambda a: area_at(a, b0),
                         max(1e-9, np.pi - b0 + 1e-9), np.pi - 1e-9)
        b0 = _golden_min(lambda b: area_at(a0, b),
                         max(1e-9, np.pi - a0 + 1e-9), np.pi - 1e-9)
    angles = np.array([theta1, theta1 + a0, theta1 + a0 + b0])
    area, corners = _support_triangle(V, angles)
    return float(area), corners


def min_enclosing_triangle(p):
    """Minimal-area triangle containing the polygon, found by enumerating the
    flush side over polygon edges with continuous refinement of the other two
    support angles. Desk-scale oracle, ~1e-6 relative area accuracy."""
    if not isinstance(p, Polygon2D):
        p = Polygon2D(np.asarray(p, dtype=np.float64))
    V = p.vertices
    m = len(V)
    best_area = np.inf
    best_corners = None
    for e in range(m):
        edge = V[(e + 1) % m] - V[e]
        theta = np.arctan2(edge[1], edge[0]) - 0.5 * np.pi  # outward normal
        area, corners = _min_triangle_flush(V, theta)
        if area < best_area:
            best_area = area
            best_corners = corners
    if best_corners is None:
        raise GeometryError("triangle search failed (degenerate polygon?)")
    return Simplex(best_corners)


# ---------------------------------------------------------------------------
# Corpus and sweep
# ---------------------------------------------------------------------------


def _random_centered_vpolytope(n, rng):
    m = 2 * n + 4
    while True:
        pts = rng.standard_normal((m, n))
        pts = pts - pts.mean(axis=0)
        try:
            body = VPolytope(pts)
        except ValueError:
            continue
        # polar work downstream needs 0 well interior
        if body._interior_margin() > 1e3 * POLAR_MARGIN_RTOL * body.scale():
            return body


def _random_hpolytope(n, rng):
    m = 2 * n + 4
    while True:
        A = rng.standard_normal((m, n))
        A /= np.linalg.norm(A, axis=1, keepdims=True)
        b = rng.uniform(0.5, 1.5, size=m)
        body = HPolytope(A, b)
        try:
            body.scale()  # finite axis supports certify boundedness
        except NotABodyError:
            continue
        return body


def regular_centered_simplex(n):
    """S(e_1, ..., e_n, -sum e_i): barycenter exactly 0."""
    return Simplex(np.vstack([np.eye(n), -np.ones((1, n))]))


def default_corpus(n, seed=0):
    """Named bodies spanning the kinds: ball, cube, cross-polytope, a random
    centered V-polytope, a random H-polytope, and a centered simplex."""
    rng = make_rng(seed, stream=0xC0DE + n)
    eye = np.eye(n)
    return [
        ("ball", Ball(1.0, n)),
        ("cube", Cube(0.5, n)),
        ("cross", VPolytope(np.vstack([eye, -eye]))),
        ("vpoly", _random_centered_vpolytope(n, rng)),
        ("hpoly", _random_hpolytope(n, rng)),
        ("simplex", SimplexBody(regular_centered_simplex(n))),
    ]

_CORPUS_NAMES = ("ball", "cube", "cross", "vpoly", "hpoly", "simplex")


def sweep(dimensions, bodies=None, trials=2000, seed=0, stamp=False):
    """Run the construction and the enclosing pipeline over (dimension, body)
    cells; returns an ExperimentReport whose rows serialize to the sweep CSV.
    Per-cell failures are recorded as nan rows and the sweep continues."""
    rows = []
    for n in dimensions:
        corpus = default_corpus(n, seed=seed)
        for idx, (name, body) in enumerate(corpus):
            if bodies is not None and name not in bodies:
                continue
            stream = (int(n) << 8) | idx
            row = {"n": int(n), "body": name}
            try:
                model = isotropic_transform(body, seed=derive_seed(seed, stream))
                image = model.image_of(body)
                rep = run_trials(image, model, trials,
                                 seed=derive_seed(seed, stream + 0x10000))
                level = float(np.exp(-n) / 2.0)
                row["success_rate"] = rep.aggregates["success_rate"]
                row["c1_quantile"] = tail_quantile(u_statistic(rep), level,
                                                   upper=True)
                row["c2_quantile"] = positive_lower_quantile(
                    volume_statistic(rep), level)
                enc = enclose(body, trials, seed=derive_seed(seed, stream + 0x20000))
                row["normalized_ratio"] = enc.normalized
                row["eqb_residual"] = enc.eqb_residual
            except GeometryError as exc:
                logger.warning("sweep cell (n=%d, %s) failed: %s", n, name, exc)
                for col in ("success_rate", "c1_quantile", "c2_quantile",
                            "normalized_ratio", "eqb_residual"):
                    row.setdefault(col, float("nan"))
            rows.append(row)
    config = {
        "dimensions": [int(n) for n in dimensions],
        "bodies": list(bodies) if bodies is not None else list(_CORPUS_NAMES),
        "trials": int(trials),
        "seed": int(seed),
    }
    return ExperimentReport(config=config, rows=rows, stamp=stamp)
