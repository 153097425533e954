"""Build script: compiles the RK4 kernel extension when Cython is present.

The package works without the extension (a numpy fallback is selected at
import), so a missing compiler only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension(
            "nhqc._core",
            ["src/nhqc/_core.pyx"],
            extra_compile_args=["-O3"],
        )],
        language_level="3",
    )

setup(ext_modules=ext_modules)
