"""Select the compiled core if it is importable, else the numpy fallback.

Set ``COVKERNEL_PURE=1`` to force the fallback.
"""
import os

from . import _core_py

BACKEND = "python"
if os.environ.get("COVKERNEL_PURE") != "1":
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _core_py
else:
    _impl = _core_py

log_bessel_series = _impl.log_bessel_series
charpoly_products = _impl.charpoly_products

__all__ = ["BACKEND", "log_bessel_series", "charpoly_products"]
