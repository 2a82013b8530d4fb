"""Hot numeric kernels with interchangeable numba and numpy backends.

The backend is fixed at import time from ``IRS_SECLAB_KERNELS`` (``numba`` by
default, ``numpy`` to force the fallback). Both backends are always importable
as ``loops`` and ``vectorized`` for benchmarking and cross-checks.
"""

from . import _loops as loops
from . import _vectorized as vectorized
from ._backend import ENV_VAR, NUMBA_AVAILABLE, USE_NUMBA

BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = loops if USE_NUMBA else vectorized

secrecy_ascent = _impl.secrecy_ascent
covert_bruteforce = _impl.covert_bruteforce
table_eval = vectorized.table_eval

__all__ = [
    "BACKEND", "ENV_VAR", "NUMBA_AVAILABLE", "USE_NUMBA",
    "covert_bruteforce", "loops", "secrecy_ascent", "table_eval", "vectorized",
]
