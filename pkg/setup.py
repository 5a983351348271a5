import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to a numpy
# implementation when the extension is absent (see annealed_ising.kernels).
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "annealed_ising._gtable_core",
                ["src/annealed_ising/_gtable_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
