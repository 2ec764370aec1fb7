"""Isotropic position: volume-1, barycenter-0, covariance-whitened bodies.

The normalizing map is x -> s * C^{-1/2} (x - b) with s fixing the image
volume at 1; the isotropic constant estimate is l_hat = (det C_image)^{1/2n},
which reduces to s when the moments are taken as exact. The KLS-style
inclusion sqrt((n+2)/n) * l_hat * B_2^n inside the image is what the
recentering construction relies on.
"""

from dataclasses import dataclass

import numpy as np

from .bodies import (
    AffineMap,
    GeometryError,
    NoExactVolumeError,
    TransformedBody,
    support_box,
)
from .sampling import SamplerHandle

MIN_MOMENT_FACTOR = 100      # hard floor N >= 100 n^2 for the MC path
DEFAULT_MOMENT_FACTOR = 200  # default budget max(10^4, 200 n^2)
COV_CONDITION_RTOL = 1e-12
MC_VOLUME_MAX_DIM = 6
DEFAULT_MC_VOLUME_SAMPLES = 200_000


class ConditioningError(GeometryError):
    """Covariance too ill-conditioned to whiten reliably."""


def default_moment_budget(n):
    return max(10_000, DEFAULT_MOMENT_FACTOR * n * n)


@dataclass(frozen=True)
class IsotropicModel:
    """Normalizing map plus diagnostics of the achieved isotropy."""

    map: AffineMap
    l_hat: float
    cov_residual: float
    sample_count: int

    @property
    def dim(self):
        return self.map.dim

    def cov_tolerance(self):
        """Declared statistical tolerance for cov_residual."""
        n = self.dim
        return 4.0 * self.l_hat ** 2 * np.sqrt(n / self.sample_count)

    def image_of(self, body):
        return TransformedBody(body, self.map)


def estimate_moments(k, sampler=None, n_samples=None, method="auto", seed=0):
    """(barycenter, covariance) of the uniform distribution on k.

    method "auto" uses the kind's exact moments when available and Monte
    Carlo otherwise; "exact"/"mc" force a path. The MC path requires
    n_samples >= 100 n^2.
    """
    if method not in ("auto", "exact", "mc"):
        raise ValueError("method must be auto/exact/mc")
    if method != "mc":
        try:
            return k.exact_moments()
        except NoExactVolumeError:
            if method == "exact":
                raise
    n = k.dim
    if n_samples is None:
        n_samples = default_moment_budget(n)
    if n_samples < MIN_MOMENT_FACTOR * n * n:
        raise ValueError("moment estimation needs at least 100 n^2 samples")
    if sampler is None:
        sampler = SamplerHandle(k, seed=seed)
    pts = sampler.draw(n_samples)
    bar = pts.mean(axis=0)
    cov = np.cov(pts.T, ddof=1)
    return bar, np.atleast_2d(cov)


def mc_volume(k, n_samples=DEFAULT_MC_VOLUME_SAMPLES, seed=0):
    """Rejection volume inside the exact support bounding box (desk scale)."""
    n = k.dim
    if n > MC_VOLUME_MAX_DIM:
        raise NoExactVolumeError("Monte Carlo volume limited to n <= %d"
                                 % MC_VOLUME_MAX_DIM)
    lo, hi = support_box(k)
    widths = hi - lo
    rng = np.random.default_rng(seed)
    pts = rng.random((int(n_samples), n)) * widths + lo
    frac = float(np.mean(k.contains_many(pts)))
    return float(np.prod(widths)) * frac


def body_volume(k, seed=0):
    """Exact volume when the kind provides one, else Monte Carlo rejection."""
    try:
        return k.exact_volume()
    except NoExactVolumeError:
        return mc_volume(k, seed=seed)


def isotropic_transform(k, moments=None, sample_count=None, seed=0,
                        center_shift=True):
    """Build the IsotropicModel of k.

    moments: optional (barycenter, covariance) override; None estimates them
    (exact path when the kind has one). center_shift=False builds a purely
    linear map (shift 0) from the supplied moments; callers that need a
    linear normalization pass second moments taken about the origin.
    """
    n = k.dim
    if moments is None:
        moments = estimate_moments(k, n_samples=sample_count, seed=seed)
    bar, cov = moments
    bar = np.asarray(bar, dtype=np.float64)
    cov = np.asarray(cov, dtype=np.float64)

    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min() <= COV_CONDITION_RTOL * eigvals.max():
        raise ConditioningError("covariance condition number beyond 1e12")

    vol = body_volume(k, seed=derive_check_seed(seed, 1))
    # s = (vol * det(C^{-1/2}))^{-1/n}, in the log domain
    log_s = (-np.log(vol) + 0.5 * np.sum(np.log(eigvals))) / n
    s = float(np.exp(log_s))
    inv_sqrt = eigvecs @ np.diag(eigvals ** -0.5) @ eigvecs.T
    linear = s * inv_sqrt
    shift = -linear @ bar if center_shift else np.zeros(n)
    amap = AffineMap(linear, shift)

    l_hat = s  # (det C_image)^{1/2n} with C_image = s^2 I under these moments

    # observed residual on a transformed verification sample
    image = TransformedBody(k, amap)
    n_check = sample_count if sample_count is not None else default_moment_budget(n)
    checker = SamplerHandle(image, seed=derive_check_seed(seed, 2))
    pts = checker.draw(n_check)
    cov_image = np.atleast_2d(np.cov(pts.T, ddof=1))
    cov_residual = float(np.max(np.abs(cov_image - l_hat ** 2 * np.eye(n))))

    return IsotropicModel(map=amap, l_hat=l_hat, cov_residual=cov_residual,
                          sample_count=int(n_check))


def derive_check_seed(seed, salt):
    # keep diagnostic streams away from the caller's stream 0
    from .sampling import derive_seed

    return derive_seed(seed, 0x5EED0000 + salt)


def kls_inradius(l_hat, n):
    """Guaranteed Euclidean inradius sqrt((n+2)/n) * l_hat of the isotropic image."""
    if l_hat <= 0:
        raise ValueError("l_hat must be positive")
    return float(np.sqrt((n + 2.0) / n) * l_hat)
