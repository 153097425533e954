"""Select the integration kernels at import time.

The compiled extension ``nhqc._core`` is preferred; the pure-numpy module
``nhqc._kernels_py`` is the drop-in fallback.  Set ``NHQC_PURE_PYTHON=1``
to force the fallback (used by the backend-equivalence tests and the
benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("NHQC_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _core as _impl
    except ImportError:                      # extension not built
        _impl = _kernels_py

lindblad_rk4 = _impl.lindblad_rk4
lindblad_rk4_propagator = _impl.lindblad_rk4_propagator
schrodinger_rk4 = _impl.schrodinger_rk4


def backend_name() -> str:
    return _impl.BACKEND
