from setuptools import Extension, setup
from Cython.Build import cythonize

ext_modules = [
    Extension(
        "polarscale._kernels",
        sources=["src/polarscale/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        ext_modules,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    ),
)
