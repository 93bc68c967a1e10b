import os

from setuptools import Extension, setup

# The compiled loops are optional: if Cython or a C compiler is missing the
# package falls back to the pure-Python twin selected in liepid.kernels.
ext_modules = []
if os.environ.get("LIEPID_NO_EXT", "") not in ("1", "true"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "liepid._speedups",
                    sources=["src/liepid/_speedups.pyx"],
                    # keep sin/cos as separate libm calls (no sincos
                    # combining) so compiled trajectories match the
                    # pure-Python fallback bit for bit
                    extra_compile_args=["-O3", "-fno-builtin-sin",
                                        "-fno-builtin-cos"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
