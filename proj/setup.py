"""setuptools driver that delegates the extension build to CMake.

Builds the `_core` target of the top-level CMake project and drops the
resulting module into the `frobsurf` package.  Requires cmake and a C++20
compiler on PATH; with `pip install --no-build-isolation` the system
pybind11 is used.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source = Path(__file__).resolve().parent
        build = Path(self.build_temp).resolve() / "cmake"
        build.mkdir(parents=True, exist_ok=True)
        subprocess.run(
            [
                "cmake",
                "-S", str(source),
                "-B", str(build),
                f"-DPython3_EXECUTABLE={sys.executable}",
                "-DCMAKE_BUILD_TYPE=Release",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build), "--target", "_core", "--parallel"],
            check=True,
        )
        built = sorted((build / "python" / "frobsurf").glob("_core.*"))
        if not built:
            raise RuntimeError("cmake did not produce the _core module")
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[0], dest)


setup(
    packages=["frobsurf"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("frobsurf._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)
