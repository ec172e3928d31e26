"""Selects the compiled kernels when importable, else the numpy fallback.

Set ``GRUSHIN_PURE_PYTHON=1`` before import to force the fallback, or call
:func:`use_backend` at runtime.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_active: ModuleType = _pykernels
if _ckernels is not None and not os.environ.get("GRUSHIN_PURE_PYTHON"):
    _active = _ckernels


def available() -> list[str]:
    names = ["python"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def kernels() -> ModuleType:
    """Return the module currently serving the hot loops."""
    return _active


def backend_name() -> str:
    return _active.NAME


def set_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _pykernels
    elif name == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextmanager
def use_backend(name: str):
    """Temporarily switch backend inside a ``with`` block."""
    previous = _active.NAME
    set_backend(name)
    try:
        yield kernels()
    finally:
        set_backend(previous)
