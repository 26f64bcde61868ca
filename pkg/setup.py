"""Build script for the optional compiled CDCL kernel.

The package works without the extension (a pure-Python kernel with the
same behavior is selected at import time), so a failing compile only
costs speed.  Set PQEVERIFY_PURE=1 to skip the extension entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            print(f"warning: compiled kernel build failed ({exc}); "
                  "falling back to the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "falling back to the pure-Python kernel")


ext_modules = []
if os.environ.get("PQEVERIFY_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "pqeverify._ckernel",
                    ["src/pqeverify/_ckernel.pyx"],
                    language="c++",
                    extra_compile_args=["-O2", "-std=c++17"],
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
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
