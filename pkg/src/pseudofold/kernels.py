"""Backend selection for the rank kernel.

The compiled extension is used when it was built; setting
``PSEUDOFOLD_PURE_PYTHON=1`` forces the pure-Python version.
"""
import os
from array import array

from . import _pykernels

if os.environ.get("PSEUDOFOLD_PURE_PYTHON") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def rank_mod_p(matrix, p: int) -> int:
    """Rank of an integer matrix (list of equal-length rows) modulo prime ``p`` < 2**31."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    if not nrows or not ncols:
        return 0
    if BACKEND == "cython":
        data = array("q", (x % p for row in matrix for x in row))
        return _impl.rank_mod_p(data, nrows, ncols, p)
    return _impl.rank_mod_p([x for row in matrix for x in row], nrows, ncols, p)
