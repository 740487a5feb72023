from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the pure-numpy
# implementation in doublebracket._kernels_py when the extension is absent.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("doublebracket._kernels", ["src/doublebracket/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

# build in place via: python setup.py build_ext --inplace
