"""Build the optional Cython core.

The extension is optional: if Cython or a compiler is missing the package
falls back to the numpy implementation in ``covkernel._core_py``.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("COVKERNEL_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "covkernel._core",
                    ["src/covkernel/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
