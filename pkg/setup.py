"""Build script for the optional compiled kernels.

The package is pure Python except for tmncell.robot._ckernel, a Cython
module holding the manipulator-dynamics inner loops. The extension is
optional: if Cython or a C compiler is unavailable the install falls back
to the numpy kernels in tmncell.robot._pykernel (selected at import time).
Set TMNCELL_SKIP_EXT=1 to skip the extension build explicitly.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if os.environ.get("TMNCELL_SKIP_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "tmncell.robot._ckernel",
        sources=["src/tmncell/robot/_ckernel.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Never fail the install because the compiled kernels did not build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"warning: skipping compiled kernels ({exc}); "
                  "pure-Python backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "pure-Python backend will be used")


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
