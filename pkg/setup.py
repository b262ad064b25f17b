"""Build script: compiles the optional trace-likelihood kernel.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the Monte-Carlo estimators faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "alphainfo.kernels._core",
                ["src/alphainfo/kernels/_core.pyx"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
