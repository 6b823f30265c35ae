"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``KPCOHFT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("KPCOHFT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

E_OFF = _pykernels.E_OFF


def backends():
    """Available backend modules keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found


def conv_trunc(a, b, n, zero):
    return _impl.conv_trunc(a, b, n, zero)


def sparse_mul(a_terms, b_terms, wcap, hcap, sigma, nmax):
    return _impl.sparse_mul(a_terms, b_terms, wcap, hcap, sigma, nmax)
