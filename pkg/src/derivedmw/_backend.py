"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``DERIVEDMW_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("DERIVEDMW_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels
        BACKEND = "python"

DEGREVLEX = kernels.DEGREVLEX
LEX = kernels.LEX
ELIM = kernels.ELIM

__all__ = ["kernels", "BACKEND", "DEGREVLEX", "LEX", "ELIM"]
