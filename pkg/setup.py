"""Build script for the optional compiled velocity-Verlet kernel.

The package is fully functional without the extension (a numpy fallback
is selected at import time), so a failed compile is downgraded to a
warning rather than aborting the install.
"""
import warnings

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "easc._verlet",
                ["src/easc/_verlet.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only without Cython
    warnings.warn(f"building without compiled kernel: {exc}")
    extensions = []

setup(ext_modules=extensions)
