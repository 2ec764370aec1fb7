"""Backend selection for the compiled hit-and-run kernel.

The compiled extension is optional; a numpy implementation with the same
contract ships alongside it. Selection happens once at import:

  SIMPLEXFIT_BACKEND=auto  compiled if importable, else numpy (default)
  SIMPLEXFIT_BACKEND=c     require the compiled kernel
  SIMPLEXFIT_BACKEND=py    force the numpy kernel
"""

import logging
import os

from . import _kernels_py

logger = logging.getLogger(__name__)

_choice = os.environ.get("SIMPLEXFIT_BACKEND", "auto").lower()

if _choice not in ("auto", "c", "py"):
    raise ValueError("SIMPLEXFIT_BACKEND must be one of auto/c/py, got %r" % _choice)

if _choice == "py":
    _impl = _kernels_py
    BACKEND = "py"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise ImportError(
                "SIMPLEXFIT_BACKEND=c but the compiled kernel is not available; "
                "rebuild the package with a C compiler and Cython"
            )
        _impl = _kernels_py
        BACKEND = "py"
        logger.info("compiled kernel unavailable, using numpy fallback")

hnr_walk_hrep = _impl.hnr_walk_hrep


def get_kernel(backend=None):
    """Return the hnr_walk_hrep callable for an explicit backend choice.

    backend None means the module-level selection. Used by tests and the
    benchmark to compare implementations side by side.
    """
    if backend in (None, BACKEND):
        return hnr_walk_hrep
    if backend == "py":
        return _kernels_py.hnr_walk_hrep
    if backend == "c":
        from . import _kernels  # raises ImportError if not built

        return _kernels.hnr_walk_hrep
    raise ValueError("unknown backend %r" % backend)
