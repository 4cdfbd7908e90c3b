"""Build script for the optional compiled gravitation kernel.

The package works without the extension (a NumPy/SciPy implementation is
selected at import time); the Cython kernel is a speedup, so a failed
compile downgrades to a warning instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, broken toolchain, ...
            warnings.warn(f"could not build the compiled kernel ({exc}); "
                          "falling back to the pure NumPy backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"could not build {ext.name} ({exc}); "
                          "falling back to the pure NumPy backend")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; skipping the compiled kernel")
        return []
    return cythonize(
        [
            Extension(
                "gravlabel._gravity",
                ["src/gravlabel/_gravity.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
