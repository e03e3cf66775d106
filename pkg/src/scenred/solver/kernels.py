"""Backend selection for the simplex pivot kernel.

The compiled extension is used when it imported cleanly; the numpy fallback
otherwise. ``SCENRED_KERNEL=python`` or ``=cython`` forces a backend (the
latter raises if the extension is unavailable).
"""

from __future__ import annotations

import os

from . import _kernel_py

_forced = os.environ.get("SCENRED_KERNEL", "").strip().lower()

if _forced == "python":
    _impl = _kernel_py
    BACKEND = "python"
else:
    try:
        from . import _kernel as _compiled

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _kernel_py
        BACKEND = "python"

run_phase = _impl.run_phase

NB_LB = _kernel_py.NB_LB
NB_UB = _kernel_py.NB_UB
BASIC = _kernel_py.BASIC
PHASE_OPTIMAL = _kernel_py.PHASE_OPTIMAL
PHASE_UNBOUNDED = _kernel_py.PHASE_UNBOUNDED
PHASE_ITER_LIMIT = _kernel_py.PHASE_ITER_LIMIT
PHASE_REFACTOR = _kernel_py.PHASE_REFACTOR


def get_backend(name: str | None = None):
    """Return (run_phase, backend_name) for ``name`` in {None, 'python', 'cython'}."""
    if name is None:
        return run_phase, BACKEND
    if name == "python":
        return _kernel_py.run_phase, "python"
    if name == "cython":
        from . import _kernel as compiled

        return compiled.run_phase, "cython"
    raise ValueError(f"unknown kernel backend: {name!r}")
