from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

# The extension compiles the core sources directly; the CMake tree remains the
# build used for the CLI and the C++ test suites.
ext = Pybind11Extension(
    "cxglearn._core",
    sources=[
        "bindings/cxg_module.cpp",
        "src/association.cpp",
        "src/candidates.cpp",
        "src/corpus.cpp",
        "src/experiment.cpp",
        "src/grammar.cpp",
        "src/mdl.cpp",
        "src/similarity.cpp",
    ],
    include_dirs=["include"],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
