# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hit-and-run kernel for H-representation bodies.

Contract identical to _kernels_py.hnr_walk_hrep: all randomness is pre-drawn
by the caller, so the walk is a deterministic function of its inputs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF PARALLEL_EPS = 1e-13


def hnr_walk_hrep(A, b, x0, directions, fractions, Py_ssize_t burn_in,
                  Py_ssize_t thin, out):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] A_c = \
        np.ascontiguousarray(A, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] b_c = \
        np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] x = \
        np.array(x0, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] dirs = \
        np.ascontiguousarray(directions, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] fracs = \
        np.ascontiguousarray(fractions, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] out_c = out

    cdef Py_ssize_t m = A_c.shape[0]
    cdef Py_ssize_t n = A_c.shape[1]
    cdef Py_ssize_t steps = dirs.shape[0]
    if steps != burn_in + thin * out_c.shape[0]:
        raise ValueError("step budget does not match burn_in/thin/out")

    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] r = \
        np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] Ad = \
        np.empty(m, dtype=np.float64)

    cdef double[:, ::1] Av = A_c
    cdef double[::1] bv = b_c
    cdef double[::1] xv = x
    cdef double[:, ::1] dv = dirs
    cdef double[::1] fv = fracs
    cdef double[:, ::1] ov = out_c
    cdef double[::1] rv = r
    cdef double[::1] adv = Ad

    cdef Py_ssize_t i, j, step, emitted, k
    cdef double acc, bscale, scale, eps, t_lo, t_hi, t, q, ad

    bscale = 1.0
    for i in range(m):
        if bv[i] > bscale:
            bscale = bv[i]
        elif -bv[i] > bscale:
            bscale = -bv[i]
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += Av[i, j] * xv[j]
        rv[i] = bv[i] - acc
        if rv[i] < -1e-9 * bscale:
            raise ValueError("start point not inside the body")
        if rv[i] < 0.0:
            rv[i] = 0.0

    emitted = 0
    for step in range(steps):
        scale = 0.0
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += Av[i, j] * dv[step, j]
            adv[i] = acc
            if acc > scale:
                scale = acc
            elif -acc > scale:
                scale = -acc
        if scale == 0.0:
            # A d = 0 for bounded {Ax <= b} forces d = 0: no chord exists
            raise ValueError("unbounded chord: body is not bounded")
        eps = PARALLEL_EPS * scale
        t_lo = -np.inf
        t_hi = np.inf
        for i in range(m):
            ad = adv[i]
            if ad > eps:
                q = rv[i] / ad
                if q < t_hi:
                    t_hi = q
            elif ad < -eps:
                q = rv[i] / ad
                if q > t_lo:
                    t_lo = q
        if t_hi == np.inf or t_lo == -np.inf:
            raise ValueError("unbounded chord: body is not bounded")
        if t_hi < t_lo:
            t = 0.0
        else:
            t = t_lo + fv[step] * (t_hi - t_lo)
        for j in range(n):
            xv[j] += t * dv[step, j]
        for i in range(m):
            rv[i] -= t * adv[i]
            if rv[i] < 0.0:
                rv[i] = 0.0
        k = step + 1 - burn_in
        if k > 0 and k % thin == 0 and emitted < ov.shape[0]:
            for j in range(n):
                ov[emitted, j] = xv[j]
            emitted += 1
    return x
