"""Builds the compiled qgraft._native module by delegating to cargo."""

import shutil
import subprocess
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "qgraft-py"],
            cwd=ROOT,
            check=True,
        )
        built = ROOT / "target" / "release" / "libqgraft_py.so"
        if not built.exists():
            built = ROOT / "target" / "release" / "libqgraft_py.dylib"
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(built, dest)


setup(
    ext_modules=[Extension("qgraft._native", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
)
