"""Kernel backend selection.

The compiled extension (``ilpk._kernels``, Cython) is used when it imported
successfully; otherwise the pure-Python fallback takes over.  Set
ILPK_BACKEND=python to force the fallback, ILPK_BACKEND=c to insist on the
extension (ImportError if it is missing).  Both backends are semantically
identical; tests assert bit-for-bit equal outputs.
"""

from __future__ import annotations

import os

from . import _pykernels

_requested = os.environ.get("ILPK_BACKEND", "auto").strip().lower()

if _requested == "python":
    _impl = _pykernels
elif _requested in ("auto", "", "c"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "c":
            raise
        _impl = _pykernels
else:
    raise ValueError(f"ILPK_BACKEND={_requested!r}; expected auto, c, or python")

BACKEND_NAME = "c" if _impl is not _pykernels else "python"


def run_table_program(ops):
    return _impl.run_table_program(ops)


def brute_first_feasible(radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    return _impl.brute_first_feasible(radices, lows, row_ptr, row_var, row_coef,
                                      row_rel, row_rhs)


def brute_boundary_offsets(nb, radices, lows, row_ptr, row_var, row_coef, row_rel, row_rhs):
    return _impl.brute_boundary_offsets(nb, radices, lows, row_ptr, row_var, row_coef,
                                        row_rel, row_rhs)


def elimination_order_dp(n, adj):
    return _impl.elimination_order_dp(n, adj)
