from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the compiled kernels must produce bit-identical results
# to the pure-Python fallback, so FMA contraction is disabled.
ext = Extension(
    "nnsteg._kernels._ckernels",
    ["src/nnsteg/_kernels/_ckernels.pyx"],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

setup(
    ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}),
)
