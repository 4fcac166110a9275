"""Build script.  The compiled elimination kernel is optional: if Cython (or a
C compiler) is unavailable the package installs pure-Python only and selects
the fallback kernel at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gltilt/_linalg_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - depends on build host
    print(f"gltilt: skipping compiled kernel ({exc!r}); pure-Python fallback will be used")

setup(ext_modules=ext_modules)
