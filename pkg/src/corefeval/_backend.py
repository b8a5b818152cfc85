"""Kernel backend selection.

Prefers the compiled extension and falls back to the pure-Python twin
when it is missing (source install without a C toolchain).  Set
``COREFEVAL_PURE_PYTHON=1`` to force the fallback; both backends produce
bit-identical results, so the choice only affects speed.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("COREFEVAL_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "pure-python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "pure-python"

LINKAGE_CODES = {
    "average": _pykernels.LINKAGE_AVERAGE,
    "single": _pykernels.LINKAGE_SINGLE,
    "complete": _pykernels.LINKAGE_COMPLETE,
}


def backend_name() -> str:
    """Name of the active kernel backend."""
    return BACKEND


def solve_dense(raw) -> tuple[float, list[tuple[int, int]]]:
    """Dispatch a maximum-score assignment solve to the active backend."""
    raw = np.ascontiguousarray(raw, dtype=np.float64)
    if raw.ndim != 2:
        raise ValueError("score matrix must be two-dimensional")
    return _impl.solve_dense(raw)


def agglomerate(sim, rank, linkage: int, tau: float, stop_at: int) -> np.ndarray:
    """Dispatch an agglomerative merge run to the active backend."""
    sim = np.ascontiguousarray(sim, dtype=np.float64)
    rank = np.ascontiguousarray(rank, dtype=np.int64)
    n = sim.shape[0]
    if sim.ndim != 2 or sim.shape[1] != n:
        raise ValueError("similarity matrix must be square")
    if rank.shape != (n,):
        raise ValueError("rank vector must match the matrix size")
    if stop_at < 1:
        raise ValueError("stop_at must be at least 1")
    return np.asarray(_impl.agglomerate(sim, rank, linkage, tau, stop_at))
