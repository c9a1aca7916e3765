"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python twin
is selected at import time), so any failure here degrades to a warning
instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/irslab/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(
        "warning: Cython kernel build skipped (%s); "
        "the pure-Python backend will be used\n" % exc
    )

setup(ext_modules=ext_modules)
