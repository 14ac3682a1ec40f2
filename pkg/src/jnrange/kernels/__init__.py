"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time from ``JNRANGE_BACKEND``:

* ``numba`` (default when numba imports cleanly)
* ``numpy`` (vectorized fallback, no compilation)

Both paths run the same algorithms; results agree to roundoff but are not
guaranteed to be bit-identical across backends (libm differences in
``log``/``cos``). Within one backend every kernel is deterministic.
"""
import os

from . import _numpy

try:
    from . import _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

_requested = os.environ.get("JNRANGE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"JNRANGE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

BACKEND = "numba" if (_requested == "numba" and _numba is not None) else "numpy"
_impl = _numba if BACKEND == "numba" else _numpy

IMPLEMENTATIONS = {"numpy": _numpy}
if _numba is not None:
    IMPLEMENTATIONS["numba"] = _numba

eigh_batch = _impl.eigh_batch
quad_forms = _impl.quad_forms
box_muller = _impl.box_muller

__all__ = ["BACKEND", "IMPLEMENTATIONS", "eigh_batch", "quad_forms", "box_muller"]
