import numpy as np
from setuptools import Extension, setup

# The compiled aggregation kernel is optional: slicerepair.nn.kernels falls
# back to a numpy implementation when the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "slicerepair.nn._kernels",
                ["src/slicerepair/nn/_kernels.pyx"],
                include_dirs=[np.get_include()],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
