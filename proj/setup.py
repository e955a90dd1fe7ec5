from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "levyq._levyq",
    sources=[
        "python/bindings.cpp",
        "src/config.cpp",
        "src/drift_check.cpp",
        "src/queue.cpp",
        "src/stable.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
