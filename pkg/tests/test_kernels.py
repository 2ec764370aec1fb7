"""Hit-and-run kernel: both backends against an analytic chord oracle and
against each other (bitwise)."""

import numpy as np
import pytest

import simplexfit.kernels as kernels


def cube_chord(x, d, h):
    """Exact [t_lo, t_hi] with x + t d inside [-h, h]^n, by per-axis clipping."""
    t_lo, t_hi = -np.inf, np.inf
    for xi, di in zip(x, d):
        if di > 0:
            t_hi = min(t_hi, (h - xi) / di)
            t_lo = max(t_lo, (-h - xi) / di)
        elif di < 0:
            t_hi = min(t_hi, (-h - xi) / di)
            t_lo = max(t_lo, (h - xi) / di)
    return t_lo, t_hi


def cube_hrep(n, h=0.5):
    return np.vstack([np.eye(n), -np.eye(n)]), np.full(2 * n, h)


def reference_walk(A, b, x0, directions, fractions, burn_in, thin, h):
    """Plain-python walk using the analytic cube chord; must match the
    kernels step for step on the cube."""
    x = x0.copy()
    out = []
    for step in range(len(directions)):
        d = directions[step]
        t_lo, t_hi = cube_chord(x, d, h)
        x = x + (t_lo + fractions[step] * (t_hi - t_lo)) * d
        k = step + 1 - burn_in
        if k > 0 and k % thin == 0:
            out.append(x.copy())
    return np.array(out)


@pytest.mark.parametrize("backend", ["py", "c"])
def test_kernel_matches_analytic_cube_walk(backend):
    kern = kernels.get_kernel(backend)
    n, h = 3, 0.5
    A, b = cube_hrep(n, h)
    rng = np.random.default_rng(7)
    D = rng.standard_normal((200, n))
    F = rng.random(200)
    out = np.empty((15, n))
    kern(A, b, np.zeros(n), D, F, 50, 10, out)
    ref = reference_walk(A, b, np.zeros(n), D, F, 50, 10, h)
    assert np.allclose(out, ref, atol=1e-12)
    assert np.all(np.abs(out) <= h + 1e-9)


def test_backends_bitwise_identical():
    kc = kernels.get_kernel("c")
    kp = kernels.get_kernel("py")
    for seed in (0, 1, 2):
        for n in (2, 4, 7):
            A, b = cube_hrep(n)
            rng = np.random.default_rng(seed)
            D = rng.standard_normal((300, n))
            F = rng.random(300)
            oc = np.empty((25, n))
            op = np.empty((25, n))
            xc = kc(A, b, np.zeros(n), D, F, 50, 10, oc)
            xp = kp(A, b, np.zeros(n), D, F, 50, 10, op)
            assert np.array_equal(oc, op)
            assert np.array_equal(xc, xp)


@pytest.mark.parametrize("backend", ["py", "c"])
def test_kernel_rejects_exterior_start(backend):
    kern = kernels.get_kernel(backend)
    A, b = cube_hrep(3)
    with pytest.raises(ValueError):
        kern(A, b, np.full(3, 2.0), np.ones((10, 3)), np.full(10, 0.5), 5, 1,
             np.empty((5, 3)))


@pytest.mark.parametrize("backend", ["py", "c"])
def test_kernel_rejects_unbounded_chord(backend):
    kern = kernels.get_kernel(backend)
    A = np.array([[1.0, 0.0]])  # half-plane x <= 1
    b = np.array([1.0])
    # direction orthogonal to every normal: no constraint at all
    with pytest.raises(ValueError):
        kern(A, b, np.zeros(2), np.array([[0.0, 1.0]]), np.array([0.5]), 0, 1,
             np.empty((1, 2)))
    # constrained on one side only
    with pytest.raises(ValueError):
        kern(A, b, np.zeros(2), np.array([[1.0, 1.0]]), np.array([0.5]), 0, 1,
             np.empty((1, 2)))


@pytest.mark.parametrize("backend", ["py", "c"])
def test_kernel_step_bookkeeping(backend):
    kern = kernels.get_kernel(backend)
    A, b = cube_hrep(2)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        # directions shorter than burn_in + thin * count
        kern(A, b, np.zeros(2), rng.standard_normal((9, 2)), rng.random(9),
             5, 1, np.empty((5, 2)))


def test_backend_selection_env(monkeypatch):
    assert kernels.BACKEND in ("c", "py")
    with pytest.raises(ValueError):
        kernels.get_kernel("fortran")


def test_c_backend_is_available():
    # the build in this repository compiles the extension; the auto pick
    # must prefer it
    assert kernels.BACKEND == "c"
