"""Build script: compiles the C++ order-book kernel when Cython and a C++
toolchain are available.  The package still works without the extension;
``hindsight.backend`` falls back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/hindsight/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
