"""Pure-numpy hit-and-run kernel for H-representation bodies.

Same contract as the compiled twin in ``_kernels.pyx``: the caller pre-draws
all randomness (raw Gaussian directions and chord fractions), so the walk is
a deterministic function of its inputs regardless of backend.
"""

import numpy as np

# Directions with |A d| below this (relative to the residual scale) are treated
# as parallel to the constraint and ignored in the chord computation.
PARALLEL_EPS = 1e-13


def hnr_walk_hrep(A, b, x0, directions, fractions, burn_in, thin, out):
    """Run a hit-and-run chain in {x : A x <= b}, writing thinned states to out.

    directions: (steps, n) raw standard normals (not normalized; the chord
    parametrization is invariant to direction length). fractions: (steps,)
    uniforms on (0,1) picking the point on each chord. steps must equal
    burn_in + thin * len(out). Returns the final chain state.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    x = np.array(x0, dtype=np.float64, copy=True)
    steps = directions.shape[0]
    if steps != burn_in + thin * out.shape[0]:
        raise ValueError("step budget does not match burn_in/thin/out")

    r = b - A @ x
    # interior start required; a tiny negative residual is numerical noise
    if np.min(r) < -1e-9 * max(1.0, float(np.max(np.abs(b)))):
        raise ValueError("start point not inside the body")
    np.maximum(r, 0.0, out=r)

    emitted = 0
    for step in range(steps):
        d = directions[step]
        Ad = A @ d
        scale = np.max(np.abs(Ad))
        if scale == 0.0:
            # A d = 0 for bounded {Ax <= b} forces d = 0: no chord exists
            raise ValueError("unbounded chord: body is not bounded")
        eps = PARALLEL_EPS * scale
        pos = Ad > eps
        neg = Ad < -eps
        t_hi = np.min(r[pos] / Ad[pos]) if np.any(pos) else np.inf
        t_lo = np.max(r[neg] / Ad[neg]) if np.any(neg) else -np.inf
        if not np.isfinite(t_hi) or not np.isfinite(t_lo):
            raise ValueError("unbounded chord: body is not bounded")
        if t_hi < t_lo:
            # numerically collapsed chord at the boundary: stay put
            t = 0.0
        else:
            t = t_lo + fractions[step] * (t_hi - t_lo)
        x += t * d
        r -= t * Ad
        np.maximum(r, 0.0, out=r)
        k = step + 1 - burn_in
        if k > 0 and k % thin == 0 and emitted < out.shape[0]:
            out[emitted] = x
            emitted += 1
    return x
