import os

from setuptools import setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementations in matdist._kernels_py when the extension is absent.
ext_modules = []
if not os.environ.get("MATDIST_SKIP_EXTENSION"):
    try:
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "matdist._ckernels",
                    ["src/matdist/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
