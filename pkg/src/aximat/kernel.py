"""Selects the search kernel at import: compiled extension when built,
pure Python otherwise.  Set AXIMAT_PURE_PYTHON=1 to force the fallback."""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("AXIMAT_PURE_PYTHON"):
    _impl = _kernel_py
    BACKEND = "python"
else:
    try:
        from . import _kernel_cy as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernel_py
        BACKEND = "python"

STATUS_EXHAUSTED = _kernel_py.STATUS_EXHAUSTED
STATUS_STOPPED = _kernel_py.STATUS_STOPPED
STATUS_BUDGET = _kernel_py.STATUS_BUDGET

run_kernel = _impl.run_kernel


def get_kernel(name: str | None = None):
    """Kernel module by name: 'python', 'compiled', or None for the
    import-time default."""
    if name is None:
        return _impl
    if name == "python":
        return _kernel_py
    if name == "compiled":
        from . import _kernel_cy

        return _kernel_cy
    raise ValueError(f"unknown kernel {name!r}")
