"""Hot numeric kernels with two interchangeable backends.

The numba @njit backend is the default; setting METASUMM_NO_NUMBA=1 (or
when numba is not importable) selects the pure numpy/python fallback.
Both backends expose the same functions and draw identical pseudo-random
sequences; see benchmarks/bench_kernels.py for a speed comparison.
"""

import os

_flag = os.environ.get("METASUMM_NO_NUMBA", "").strip().lower()
FORCED_FALLBACK = _flag in {"1", "true", "yes", "on"}

if FORCED_FALLBACK:
    from . import _purepy as _impl

    USING_NUMBA = False
else:
    try:
        from . import _numbaimpl as _impl

        USING_NUMBA = True
    except ImportError:
        from . import _purepy as _impl

        USING_NUMBA = False

BACKEND = "numba" if USING_NUMBA else "numpy"

lcs_len = _impl.lcs_len
lcs_ref_mask = _impl.lcs_ref_mask
d2v_train_block = _impl.d2v_train_block
best_split = _impl.best_split

__all__ = [
    "BACKEND",
    "USING_NUMBA",
    "FORCED_FALLBACK",
    "lcs_len",
    "lcs_ref_mask",
    "d2v_train_block",
    "best_split",
]
