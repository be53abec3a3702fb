"""Kernel backend selection: compiled extension when built, pure Python otherwise.

Set ``DCECOND_PURE=1`` in the environment to force the pure-Python kernels
even when the extension is available.  ``load()`` gives explicit access to
either backend, which is what ``benchmarks/backend_compare.py`` uses to time
one against the other.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_FORCE_PURE = os.environ.get("DCECOND_PURE", "") not in ("", "0")

_active = _pykernels if (_FORCE_PURE or _ckernels is None) else _ckernels

BACKEND = _active.BACKEND
SlotArray = _active.SlotArray
work_loop = _active.work_loop

__all__ = ["BACKEND", "SlotArray", "available_backends", "load", "work_loop"]


def available_backends() -> tuple:
    return ("pure",) if _ckernels is None else ("compiled", "pure")


def load(backend: str = "auto"):
    """Return the kernel module for ``backend`` ("auto", "compiled" or "pure")."""
    if backend == "auto":
        return _active
    if backend == "pure":
        return _pykernels
    if backend == "compiled":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built; reinstall with a C toolchain")
        return _ckernels
    raise ValueError(f"unknown kernel backend {backend!r}")
