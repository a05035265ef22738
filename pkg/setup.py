from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "varbounds.kernels._core",
    ["src/varbounds/kernels/_core.pyx"],
)

setup(ext_modules=cythonize([ext], language_level="3"))
