"""Kernel selection.

The compiled module is used when it imports; ``CMXTAG_PURE_PYTHON=1`` forces
the numpy fallback.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    _AVAILABLE["cython"] = _ckernels

if os.environ.get("CMXTAG_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
    kernels = _pykernels
else:
    kernels = _ckernels

BACKEND = kernels.NAME


def available_backends() -> list[str]:
    return list(_AVAILABLE)


def get_kernels(name: str | None = None):
    if name is None:
        return kernels
    try:
        return _AVAILABLE[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None

