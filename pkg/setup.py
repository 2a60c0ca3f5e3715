"""Build script: compiles the optional Cython curvature kernel.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here downgrades to a pure-Python install
instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/wcurv/_kernels_cy.pyx",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
            "language_level": "3",
        },
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"wcurv: skipping Cython kernel build ({exc}); "
          "pure-Python backend will be used")

setup(ext_modules=ext_modules)
