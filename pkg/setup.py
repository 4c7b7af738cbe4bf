"""Optional Cython build of the automata kernels.

The single source for the kernels is src/strsat/nfa/_kernels.py.  At build
time it is copied to _kernels_c.py and compiled with Cython (pure-Python
mode); at import time the package picks the compiled module when present
and falls back to the interpreted one otherwise.  A failed compilation is
not an error -- the pure-Python fallback is fully functional.
"""

import os
import shutil

from setuptools import setup

HERE = os.path.dirname(os.path.abspath(__file__))
SRC = os.path.join(HERE, "src", "strsat", "nfa", "_kernels.py")
DST = os.path.join(HERE, "src", "strsat", "nfa", "_kernels_c.py")

ext_modules = []
try:
    from Cython.Build import cythonize

    shutil.copyfile(SRC, DST)
    ext_modules = cythonize(
        ["src/strsat/nfa/_kernels_c.py"],
        language_level=3,
        compiler_directives={"binding": False},
        quiet=True,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
