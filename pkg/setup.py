"""Build script: compiles the geometry overlay core with Cython when available.

The kernel at src/medbuild/geometry/_kernel.py is plain Python and works
uncompiled; cythonizing the same file in pure-Python mode yields the fast
extension.  Set MEDBUILD_PURE=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MEDBUILD_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("medbuild.geometry._kernel", ["src/medbuild/geometry/_kernel.py"])],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
