"""Select the compiled kernels when the extension was built, else pure Python.

Set ``EVENDICYCLE_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from evendicycle import _pykernels
from evendicycle._pykernels import KernelCapExceeded

BACKEND = "python"
simple_cycles = _pykernels.simple_cycles
count_perfect_matchings = _pykernels.count_perfect_matchings

if not os.environ.get("EVENDICYCLE_PURE"):
    try:
        from evendicycle import _ckernels
    except ImportError:
        pass
    else:
        simple_cycles = _ckernels.simple_cycles
        BACKEND = "cython"

        def count_perfect_matchings(n: int, adj: list[int]) -> int:
            # the compiled DP counts in 64 bits, which holds every count up to 20!
            if n > 20:
                return _pykernels.count_perfect_matchings(n, adj)
            return _ckernels.count_perfect_matchings(n, adj)

__all__ = ["BACKEND", "KernelCapExceeded", "count_perfect_matchings", "simple_cycles"]
