"""Kernel backend selection.

The hot loops (winding accumulation, piecewise propagation) exist twice:
a numba-jitted version in ``accel`` and a pure-numpy version in
``reference``.  The jitted backend is used when numba imports cleanly,
unless the environment variable SSH_TOPO_NUMBA is set to 0/false/off/no,
which forces the numpy fallback.  ``benchmarks/bench_kernels.py`` times
the two against each other.
"""

from __future__ import annotations

import os

from . import reference

ENV_FLAG = "SSH_TOPO_NUMBA"


def numba_requested() -> bool:
    value = os.environ.get(ENV_FLAG, "").strip().lower()
    return value not in ("0", "false", "off", "no")


BACKEND = "numpy"
if numba_requested():
    try:
        from . import accel as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _impl = reference
else:
    _impl = reference

winding_phase_scan = _impl.winding_phase_scan
winding_grid = _impl.winding_grid
propagate_piecewise = _impl.propagate_piecewise


def backend() -> str:
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return BACKEND
