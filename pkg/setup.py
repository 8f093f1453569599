"""Build hook: compile the optional Cython kernel when Cython is available.

The package works without it; ``perdec._kernel`` falls back to the pure
Python implementation at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "perdec._kernel.polyops_cy",
                ["src/perdec/_kernel/polyops_cy.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
