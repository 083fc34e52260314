import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the compiled kernels if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        print(
            f"WARNING: compiled kernels unavailable ({exc}); "
            "synthpara will use the pure-Python fallback",
            file=sys.stderr,
        )


extensions = [
    Extension(
        "synthpara._kernels._speedups",
        sources=["src/synthpara/_kernels/_speedups.pyx"],
        extra_compile_args=["-O3"],
    )
]

if os.environ.get("SYNTHPARA_SKIP_EXT"):
    ext_modules = []
    cmdclass = {}
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        extensions, compiler_directives={"language_level": "3"}
    )
    cmdclass = {"build_ext": optional_build_ext}

setup(ext_modules=ext_modules, cmdclass=cmdclass)
