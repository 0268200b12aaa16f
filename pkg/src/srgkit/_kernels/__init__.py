"""Numeric kernels: compiled extension when available, numpy fallback otherwise.

The compiled module carries the hot inner loops (winding numbers over probe
batches, polyline-to-polyline distance, the hybrid RK4 stepper).  Set
``SRGKIT_PURE=1`` to force the fallback, e.g. for benchmarking.
"""

import os

from . import _fallback

SIG_STEP = _fallback.SIG_STEP
SIG_SINUSOID = _fallback.SIG_SINUSOID
SIG_SAMPLES = _fallback.SIG_SAMPLES

_impl = _fallback
HAVE_COMPILED = False
if os.environ.get("SRGKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as _compiled

        _impl = _compiled
        HAVE_COMPILED = True
    except ImportError:  # extension not built; fallback stays active
        pass

winding_batch = _impl.winding_batch
polyline_gap = _impl.polyline_gap
simulate_hybrid = _impl.simulate_hybrid


def backend_name():
    return "compiled" if HAVE_COMPILED else "fallback"


def get_backend(name):
    """Fetch a specific backend module ('compiled' or 'fallback')."""
    if name == "fallback":
        return _fallback
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
