"""Build hook for the optional compiled kernels.

The extension is optional: when Cython or a C compiler is unavailable the
package installs without it and falls back to the numpy kernels.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "kreinbounds._kernels._fast",
                ["src/kreinbounds/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
