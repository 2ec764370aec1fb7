"""Isotropic normalization: moment estimation, the whitening map, l_hat."""

import numpy as np
import pytest

from simplexfit.bodies import (
    Ball,
    Cube,
    Ellipsoid,
    Simplex,
    SimplexBody,
    ball_volume,
)
from simplexfit.isotropy import (
    ConditioningError,
    IsotropicModel,
    default_moment_budget,
    estimate_moments,
    isotropic_transform,
    kls_inradius,
    mc_volume,
    body_volume,
)
from simplexfit.sampling import SamplerHandle

from conftest import random_centered_simplex


def ball_l_hat(n):
    # volume-1 ball has radius omega_n^{-1/n}; its directional second moment
    # is r^2/(n+2)
    r = ball_volume(n) ** (-1.0 / n)
    return r / np.sqrt(n + 2.0)


def test_estimate_moments_exact_path():
    bar, cov = estimate_moments(Cube(0.5, 3))
    assert np.allclose(bar, 0.0)
    assert np.allclose(cov, np.eye(3) / 12.0, atol=1e-15)


def test_estimate_moments_mc_within_tolerance():
    c = Cube(0.5, 3)
    bar, cov = estimate_moments(c, method="mc", n_samples=200_000, seed=3)
    assert np.allclose(bar, 0.0, atol=0.01)
    assert np.allclose(cov, np.eye(3) / 12.0, atol=0.005)


def test_estimate_moments_mc_budget_floor():
    with pytest.raises(ValueError):
        estimate_moments(Cube(0.5, 10), method="mc", n_samples=100)


def test_cube_isotropic_constant_exact():
    model = isotropic_transform(Cube(0.5, 4))
    assert model.l_hat == pytest.approx(12.0 ** -0.5, rel=1e-12)
    # the unit cube is already isotropic, so the image is the cube itself
    img = model.image_of(Cube(0.5, 4))
    assert img.exact_volume() == pytest.approx(1.0, rel=1e-10)
    bar, cov = img.exact_moments()
    assert np.allclose(bar, 0.0, atol=1e-12)
    assert np.allclose(cov, model.l_hat ** 2 * np.eye(4), atol=1e-14)


def test_ball_isotropic_constant_exact():
    for n in (2, 3, 6):
        model = isotropic_transform(Ball(2.0, n))
        assert model.l_hat == pytest.approx(ball_l_hat(n), rel=1e-12)


def test_ellipsoid_isotropic_constant_matches_ball(rng):
    # l_hat is a linear invariant: any ellipsoid matches the ball value
    L = rng.standard_normal((3, 3))
    M = L @ L.T + np.eye(3)
    model = isotropic_transform(Ellipsoid(M))
    assert model.l_hat == pytest.approx(ball_l_hat(3), rel=1e-10)


def test_simplex_isotropic_image(rng):
    V = random_centered_simplex(4, rng, spread=2.0)
    sb = SimplexBody(Simplex(V))
    model = isotropic_transform(sb)
    img = model.image_of(sb)
    assert img.exact_volume() == pytest.approx(1.0, rel=1e-9)
    bar, cov = img.exact_moments()
    assert np.allclose(bar, 0.0, atol=1e-10)
    assert np.allclose(cov, model.l_hat ** 2 * np.eye(4), atol=1e-12)


def test_isotropic_model_diagnostics():
    model = isotropic_transform(Cube(0.5, 3))
    assert isinstance(model, IsotropicModel)
    assert model.sample_count >= default_moment_budget(3)
    assert model.cov_residual <= model.cov_tolerance()


def test_mc_moments_isotropic_transform_close_to_exact():
    c = Cube(0.5, 3)
    bar, cov = estimate_moments(c, method="mc", n_samples=100_000, seed=9)
    model = isotropic_transform(c, moments=(bar, cov))
    exact = isotropic_transform(c)
    # 3 SE of the l_hat estimator at N = 1e5 is comfortably below 1%
    assert model.l_hat == pytest.approx(exact.l_hat, rel=0.01)


def test_conditioning_guard():
    flat = Ellipsoid(np.diag([1.0, 1.0, 1e-14]))
    with pytest.raises(ConditioningError):
        isotropic_transform(flat)


def test_kls_inradius_formula():
    assert kls_inradius(0.3, 4) == pytest.approx(0.3 * np.sqrt(6.0 / 4.0))
    model = isotropic_transform(Cube(0.5, 2))
    r = kls_inradius(model.l_hat, 2)
    # the KLS ball must actually fit inside the isotropic image
    img = model.image_of(Cube(0.5, 2))
    for ang in np.linspace(0, 2 * np.pi, 17):
        x = r * np.array([np.cos(ang), np.sin(ang)]) * (1 - 1e-9)
        assert img.contains(x)


def test_mc_volume_cube():
    c = Cube(0.5, 3)
    v = mc_volume(c, n_samples=200_000, seed=4)
    assert v == pytest.approx(1.0, rel=0.02)
    assert body_volume(c) == pytest.approx(1.0, rel=1e-12)


def test_center_shift_flag():
    # center_shift=False keeps the origin fixed: moments are taken about 0
    c = Cube(0.5, 2, centered=False)  # [0,1]^2, barycenter (0.5, 0.5)
    bar, cov = estimate_moments(c)
    second = cov + np.outer(bar, bar)
    model = isotropic_transform(c, moments=(np.zeros(2), second),
                                center_shift=False)
    assert np.allclose(model.map.shift, 0.0)
