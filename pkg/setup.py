import os

from setuptools import Extension, setup

# FAULTLOC_NO_EXT=1 skips the compiled solver core; the package then runs on
# the pure-Python fallback.
ext_modules = []
if not os.environ.get("FAULTLOC_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "faultloc.formula._cdcl",
                    ["src/faultloc/formula/_cdcl.pyx"],
                    language="c++",
                    extra_compile_args=["-O2", "-std=c++17"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)
