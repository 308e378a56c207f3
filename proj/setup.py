import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    env = os.environ.get("EIGEN3_INCLUDE_DIR")
    if env:
        return env
    for cand in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(os.path.join(cand, "Eigen")):
            return cand
    raise RuntimeError(
        "Eigen headers not found; set EIGEN3_INCLUDE_DIR to the directory "
        "containing Eigen/"
    )


ext = Pybind11Extension(
    "spvarinf._core",
    sources=sorted(glob.glob("src/*.cpp")) + ["bindings/module.cpp"],
    include_dirs=["include", "vendor", eigen_include()],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
