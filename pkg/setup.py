"""Build script: compiles the optional hit-and-run kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so the build is marked optional: a missing compiler
or Cython produces a warning, not a failed install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "simplexfit._kernels",
                ["src/simplexfit/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
