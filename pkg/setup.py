import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COOPSTORE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("coopstore._fastkern", ["src/coopstore/_fastkern.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython: install with the pure-Python kernels only.
        ext_modules = []

setup(ext_modules=ext_modules)
