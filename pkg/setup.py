"""Build hook for the optional Cython kernel.

The extension is marked optional: if no compiler is available the package
still installs and falls back to the NumPy implementation at import time.
"""
import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "curvewire._kernels",
        ["src/curvewire/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
