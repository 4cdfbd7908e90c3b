"""Selection between the compiled gravitation kernel and the NumPy one.

The compiled extension is optional: if it failed to build (or the
``GRAVLABEL_BACKEND=python`` environment variable overrides it), the
vectorized NumPy/SciPy implementation is used. Both produce the same
effects up to floating-point summation order.
"""

from __future__ import annotations

import os

from .errors import InputError

try:
    from . import _gravity  # noqa: F401
    _HAVE_COMPILED = True
except ImportError:
    _HAVE_COMPILED = False

BACKENDS = ("cython", "python")


def compiled_available() -> bool:
    return _HAVE_COMPILED


def available_backends() -> tuple[str, ...]:
    return BACKENDS if _HAVE_COMPILED else ("python",)


def resolve_backend(name: str | None = None) -> str:
    """Map a requested backend name (or None/"auto") to a usable one."""
    if name in (None, "", "auto"):
        name = os.environ.get("GRAVLABEL_BACKEND", "auto")
    if name in (None, "", "auto"):
        return "cython" if _HAVE_COMPILED else "python"
    if name not in BACKENDS:
        raise InputError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "cython" and not _HAVE_COMPILED:
        raise InputError("compiled kernel is not available in this install")
    return name
