"""Build script: compiles the optional Cython kernel extension when available.

The package runs fine without the extension (a numpy fallback is selected at
import time); set WGEMIT_NO_EXT=1 to skip compilation explicitly.
"""
import os

from setuptools import Extension, setup

_PYX = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                    "src", "wgemit", "_speedups.pyx")

ext_modules = []
if os.environ.get("WGEMIT_NO_EXT") != "1" and os.path.exists(_PYX):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "wgemit._speedups",
                    ["src/wgemit/_speedups.pyx"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
