import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SRGKIT_NO_EXT", "") not in ("1", "true"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "srgkit._kernels._speedups",
                    ["src/srgkit/_kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # Pure-python fallback kernels are selected at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
