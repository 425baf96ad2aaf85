"""Hot array kernels with a numba lane and a pure-numpy fallback.

The lane is chosen once at import time from the ``BASISNET_KERNELS``
environment variable:

* ``numba`` - require the jitted lane (ImportError if numba is missing),
* ``numpy`` - force the pure-numpy fallback,
* ``auto`` (default) - numba when importable, numpy otherwise.

``benchmarks/kernel_bench.py`` compares the two lanes end to end.
"""

from __future__ import annotations

import os

ENV_VAR = "BASISNET_KERNELS"


def _load():
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{ENV_VAR} must be auto, numba, or numpy, not {choice!r}")
    if choice == "numpy":
        from . import numpy_impl as impl
        return impl
    try:
        from . import numba_impl as impl
        return impl
    except ImportError:
        if choice == "numba":
            raise
        from . import numpy_impl as impl
        return impl


_impl = _load()

ge_mask = _impl.ge_mask
dominates_mask = _impl.dominates_mask
expand_all = _impl.expand_all
explain_all = _impl.explain_all
saturate = _impl.saturate


def backend() -> str:
    """Name of the active kernel lane ("numba" or "numpy")."""
    return _impl.BACKEND
