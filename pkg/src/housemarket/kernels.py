"""Hot sequential kernels, compiled when available.

The Cython extension ``_kernels`` is preferred; the pure-Python module
``_kernels_py`` is used when the extension was not built or when the
environment variable ``HOUSEMARKET_PURE`` is set to a non-empty value.
"""

import os

from . import _kernels_py

if os.environ.get("HOUSEMARKET_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

COMPILED = _impl is not _kernels_py
IMPLEMENTATIONS = {"python": _kernels_py}
if COMPILED:
    IMPLEMENTATIONS["compiled"] = _impl

INF_COST = _kernels_py.INF_COST
functional_cycles = _impl.functional_cycles
ttc = _impl.ttc
hungarian = _impl.hungarian
hopcroft_karp = _impl.hopcroft_karp
greedy_lfmm = _impl.greedy_lfmm
