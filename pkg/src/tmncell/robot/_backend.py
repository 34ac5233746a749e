"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
pure-numpy twin takes over. Set TMNCELL_PURE_PYTHON=1 to force the fallback,
e.g. to benchmark or to rule the extension out while debugging.
"""

from __future__ import annotations

import os

from . import _pykernel

if os.environ.get("TMNCELL_PURE_PYTHON", "").strip() not in ("", "0"):
    _kernel = _pykernel
else:
    try:
        from . import _ckernel as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _pykernel

kernel = _kernel


def backend_name() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return kernel.BACKEND_NAME


def load_kernel(name: str):
    """Load a backend by name regardless of the active default.

    Used by the benchmark and the cross-backend tests. Raises ImportError
    if the compiled extension was never built.
    """
    if name == "python":
        return _pykernel
    if name == "cython":
        from . import _ckernel
        return _ckernel
    raise ValueError(f"unknown backend {name!r}; expected 'python' or 'cython'")
