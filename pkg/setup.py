import numpy as np
from setuptools import Extension, setup

# The Viterbi kernel is optional: without Cython (or on build failure) the
# package falls back to the pure-Python implementation at import time.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "zakmub._kernels._viterbi_c",
                ["src/zakmub/_kernels/_viterbi_c.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
