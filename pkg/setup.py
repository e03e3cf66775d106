import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "scenred.solver._kernel",
                ["src/scenred/solver/_kernel.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # the pure-Python kernel is used when the build is unavailable
    warnings.warn(f"building without the compiled simplex kernel: {exc}")

setup(ext_modules=ext_modules)
