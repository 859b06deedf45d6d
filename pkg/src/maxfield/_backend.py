"""Kernel backend selection.

The compiled extension is used when it imports; ``MAXFIELD_BACKEND=python``
forces the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if os.environ.get("MAXFIELD_BACKEND", "").lower() == "python" or compiled_kernels is None:
    kernels = python_kernels
    BACKEND = "python"
else:
    kernels = compiled_kernels
    BACKEND = "compiled"


def get_kernels(name=None):
    if name is None:
        return kernels
    if name == "python":
        return python_kernels
    if name == "compiled":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not built")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")


def available():
    return ["python"] + (["compiled"] if compiled_kernels is not None else [])
