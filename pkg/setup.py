import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "ksysmax._gainc",
                ["src/ksysmax/_gainc.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

# The compiled module is optional: ksysmax falls back to the numpy kernels
# when the extension is absent (see ksysmax/kernels.py).
setup(ext_modules=ext_modules)
