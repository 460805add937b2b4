"""Selects the residual/Jacobian assembly kernel at import.

The compiled kernel is used when it was built; setting the environment
variable ``H2RCMC_PURE_PYTHON=1`` forces the numpy fallback.  ``KERNEL``
names the active one.
"""

import os

from . import _assembly_py

residual_jacobian_py = _assembly_py.residual_jacobian

try:
    from ._assembly import residual_jacobian as residual_jacobian_c
except ImportError:  # extension not built
    residual_jacobian_c = None

if residual_jacobian_c is not None and os.environ.get("H2RCMC_PURE_PYTHON", "") in ("", "0"):
    residual_jacobian = residual_jacobian_c
    KERNEL = "cython"
else:
    residual_jacobian = residual_jacobian_py
    KERNEL = "python"


def set_kernel(name: str) -> None:
    """Switch the active kernel to ``"cython"`` or ``"python"``."""
    global residual_jacobian, KERNEL
    if name == "cython":
        if residual_jacobian_c is None:
            raise ImportError("the compiled kernel is not built")
        residual_jacobian = residual_jacobian_c
    elif name == "python":
        residual_jacobian = residual_jacobian_py
    else:
        raise ValueError(f"unknown kernel {name!r}")
    KERNEL = name
