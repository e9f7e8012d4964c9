"""Builds the `stringtop_py` extension module by delegating to cargo.

Install with `pip install -e . --no-build-isolation`, or build the shared
library directly with `cargo build --release -p stringtop-py`.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = Path(__file__).resolve().parent


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "stringtop-py"],
            cwd=ROOT,
            check=True,
        )
        if sys.platform == "win32":
            built = ROOT / "target" / "release" / "stringtop_py.dll"
        elif sys.platform == "darwin":
            built = ROOT / "target" / "release" / "libstringtop_py.dylib"
        else:
            built = ROOT / "target" / "release" / "libstringtop_py.so"
        dest = Path(self.get_ext_fullpath(ext.name))
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(built, dest)


setup(
    name="stringtop-py",
    version="0.1.0",
    description="Exact string-topology computations on dg Frobenius algebras",
    ext_modules=[Extension("stringtop_py", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
    zip_safe=False,
)
