"""Build script for the optional compiled simulation kernel.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes the Monte Carlo commands faster.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "gridmfg._euler",
        ["src/gridmfg/_euler.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"})
)
