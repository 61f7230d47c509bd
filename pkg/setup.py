"""Builds the optional compiled density kernel; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("binic._kernels", ["src/binic/_kernels.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": 3},
        quiet=True,
    )
except Exception:  # Cython missing: fall back to the numpy kernels
    ext_modules = []

setup(ext_modules=ext_modules)
