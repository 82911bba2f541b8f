"""Select the kernel implementation at import time.

The compiled ``_ckernels`` extension is preferred. Setting the environment
variable ``EGSPIN_PURE_PYTHON=1`` forces the pure-Python fallback, which is
also used whenever the extension was not built.
"""
import os

from . import _pykernels

AVAILABLE = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    AVAILABLE["cython"] = _ckernels


def load(name=None):
    """Return the kernel module called ``name`` ("cython" or "python").

    With no name, pick the compiled kernels unless the environment asks for
    the fallback.
    """
    if name is None:
        forced = os.environ.get("EGSPIN_PURE_PYTHON", "").strip().lower()
        if forced not in ("", "0", "false", "no"):
            name = "python"
        else:
            name = "cython" if "cython" in AVAILABLE else "python"
    try:
        return AVAILABLE[name]
    except KeyError:
        raise ImportError(f"kernel backend {name!r} is not available") from None


kernels = load()
NAME = "cython" if kernels is _ckernels and _ckernels is not None else "python"
