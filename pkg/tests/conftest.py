"""Shared oracles for the test suite.

Wherever a closed form is under test, the expected value comes from an
independent computation (qhull volumes, rejection-sampling moments, direct
LP), never from the code under test.
"""

import numpy as np
import pytest
from scipy.spatial import ConvexHull


def hull_volume(points):
    """Volume of the convex hull of the points, straight from qhull."""
    return float(ConvexHull(points).volume)


def rejection_moments(contains_many, lo, hi, n_samples, seed):
    """Barycenter and covariance via rejection sampling from the box
    [lo, hi]^n, using only the membership predicate."""
    rng = np.random.default_rng(seed)
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    kept = []
    total = 0
    while total < n_samples:
        X = rng.random((n_samples, len(lo))) * (hi - lo) + lo
        mask = contains_many(X)
        kept.append(X[mask])
        total += int(mask.sum())
    X = np.concatenate(kept)[:n_samples]
    return X.mean(axis=0), np.cov(X.T, ddof=1)


def random_centered_simplex(n, rng, spread=1.0):
    """Random full-dimensional simplex with barycenter exactly at 0.

    Rejects draws with |det| below 1e-4 * edge^n so that the simplex and its
    polar both stay numerically well-conditioned."""
    while True:
        V = rng.standard_normal((n + 1, n)) * spread
        V = V - V.mean(axis=0)
        edge = max(np.linalg.norm(V[i] - V[j])
                   for i in range(n + 1) for j in range(i))
        if abs(np.linalg.det(V[1:] - V[0])) > 1e-4 * edge ** n:
            return V


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
