import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "h2rcmc.pde._assembly",
    ["src/h2rcmc/pde/_assembly.pyx"],
    include_dirs=[np.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    extra_compile_args=["-O3", "-ffp-contract=off"],
)

setup(ext_modules=cythonize([ext], language_level=3))
