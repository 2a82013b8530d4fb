"""Backend selection for the hot loops.

``IRS_SECLAB_KERNELS=numpy`` forces the vectorized numpy path; otherwise the
numba-compiled loops are used whenever numba imports.
"""

import os

ENV_VAR = "IRS_SECLAB_KERNELS"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_AVAILABLE = numba is not None
_requested = os.environ.get(ENV_VAR, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"{ENV_VAR} must be 'numba' or 'numpy', got {_requested!r}")
USE_NUMBA = NUMBA_AVAILABLE and _requested == "numba"


def njit(fn):
    if not NUMBA_AVAILABLE:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
