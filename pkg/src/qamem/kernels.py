"""Backend selection for the amplitude-update kernels.

The compiled extension is used when it imports; set ``QAMEM_PURE_PYTHON=1``
to force the numpy fallback. ``BACKENDS`` lists every importable backend so
tests and benchmarks can compare them directly.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("QAMEM_PURE_PYTHON"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]

controlled_x = _impl.controlled_x
controlled_u2 = _impl.controlled_u2
reflect = _impl.reflect
phase_flip = _impl.phase_flip
set_probability = _impl.set_probability
grover_trace = _impl.grover_trace
