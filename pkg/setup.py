"""Builds the optional compiled scan kernel.

The package is pure Python except for quadwief._scan._kernel, a Cython
module that accelerates the per-prime classification loop of the census.
If Cython or a C compiler is unavailable the extension is skipped and the
pure-Python fallback in quadwief._scan.pure is used instead.
"""
from setuptools import setup, Extension

ext_modules = []
try:
    from Cython.Build import cythonize

    kernel = Extension(
        "quadwief._scan._kernel",
        sources=["src/quadwief/_scan/_kernel.pyx"],
        extra_compile_args=["-O2"],
        optional=True,
    )
    ext_modules = cythonize([kernel], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)
