"""Build script for the optional compiled kernels.

The package works without the extension; ``expsum._backend`` falls back to
the pure-Python kernels when ``expsum._core`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("EXPSUM_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "expsum._core",
                    sources=["src/expsum/_core.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # The kernels must round exactly like CPython: no FMA
                    # contraction, and no fusing cos/sin into glibc sincos,
                    # which differs from cos in the last bit on some inputs.
                    extra_compile_args=["-O3", "-ffp-contract=off", "-fno-builtin-sin", "-fno-builtin-cos"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
