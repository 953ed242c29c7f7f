"""Kernel selection: compiled elimination when available, pure Python otherwise.

The compiled module covers prime fields and GF(2^m); tower (extension over
extension) fields always use the pure-Python path, which is generic over any
field object.  Set COOPSTORE_PURE=1 to force the pure path (used by the
benchmark for comparison).
"""

from __future__ import annotations

import os

from . import _purekern

try:
    from . import _fastkern
except ImportError:  # extension not built
    _fastkern = None


def _compiled_params(field):
    """(kind, m, mod) for the compiled kernel, or None if unsupported."""
    if _fastkern is None or os.environ.get("COOPSTORE_PURE") == "1":
        return None
    if field.kind == "prime":
        return (0, 0, field.order)
    if field.kind == "binary":
        return (1, field.m, field.poly)
    return None


def backend_name(field) -> str:
    return "compiled" if _compiled_params(field) is not None else "pure-python"


def rank(data, nrows, ncols, field) -> int:
    params = _compiled_params(field)
    if params is not None:
        kind, m, mod = params
        return _fastkern.rank(list(data), nrows, ncols, kind, m, mod)
    return _purekern.rank(data, nrows, ncols, field)


def solve(a_data, n, b_data, bcols, field):
    params = _compiled_params(field)
    if params is not None:
        kind, m, mod = params
        return _fastkern.solve(list(a_data), n, list(b_data), bcols, kind, m, mod)
    return _purekern.solve(a_data, n, b_data, bcols, field)
