"""Backend selection for the per-point curvature kernel.

Prefers the compiled Cython extension; falls back to the numpy
implementation when the extension was not built.  Set WCURV_FORCE_PYTHON=1
to force the fallback (used by the benchmark and the cross-check tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("WCURV_FORCE_PYTHON"):
    curvature_fields = _kernels_py.curvature_fields
    BACKEND = "python"
else:
    try:
        from . import _kernels_cy
        curvature_fields = _kernels_cy.curvature_fields
        BACKEND = "cython"
    except ImportError:
        curvature_fields = _kernels_py.curvature_fields
        BACKEND = "python"

__all__ = ["curvature_fields", "BACKEND"]
