from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernels are optional: without Cython (or a working compiler)
# the package installs anyway and falls back to the NumPy kernels at import.
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "fclsim._kernels_cy",
                ["src/fclsim/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
