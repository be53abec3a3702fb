import os

from setuptools import Extension, setup

# The compiled benchmark kernels are optional: if Cython (or a C toolchain)
# is unavailable, the package falls back to the pure-Python kernels at import
# time.  Set DCECOND_NO_EXT=1 to skip the extension build explicitly.
ext_modules = []
if os.environ.get("DCECOND_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "dcecond.bench._ckernels",
                    ["src/dcecond/bench/_ckernels.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
