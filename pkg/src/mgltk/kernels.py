"""Backend selection for the numeric kernels.

The compiled core (``_fastcore``) is preferred when present; the numpy
implementation (``_slowcore``) is the fallback.  Selection happens once at
import time and can be forced with the MGLTK_BACKEND environment variable
("cython" or "python").
"""

import os

from . import _slowcore

_requested = os.environ.get("MGLTK_BACKEND", "").strip().lower()

_impl = _slowcore
_BACKEND = "python"
if _requested not in ("python", "pure"):
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]
        _BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "MGLTK_BACKEND=cython was requested but the compiled core "
                "is not available; reinstall with a C compiler or unset the "
                "variable")


def backend_name():
    """Name of the active kernel backend: "cython" or "python"."""
    return _BACKEND


LN2 = _slowcore.LN2
SPLIT_INV_LO = _slowcore.SPLIT_INV_LO
SPLIT_INV_HI = _slowcore.SPLIT_INV_HI

entropy_scalar = _impl.entropy_scalar
entropy_array = _impl.entropy_array
convolve_scalar = _impl.convolve_scalar
convolve_array = _impl.convolve_array
entropy_inv_scalar = _impl.entropy_inv_scalar
entropy_inv_array = _impl.entropy_inv_array
split_entropy_scalar = _impl.split_entropy_scalar
split_entropy_array = _impl.split_entropy_array
split_entropy_inv_scalar = _impl.split_entropy_inv_scalar
split_entropy_inv_array = _impl.split_entropy_inv_array
mgl_gaps = _impl.mgl_gaps
