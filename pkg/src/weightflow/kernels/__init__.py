"""Backend selection for the hot loops.

``WEIGHTFLOW_BACKEND=numpy`` forces the pure numpy/scipy path. Any other value
(or none) uses numba when it can be imported and falls back otherwise.
"""
import os

from . import numpy_impl

_requested = os.environ.get("WEIGHTFLOW_BACKEND", "numba").strip().lower()

if _requested == "numpy":
    _impl = numpy_impl
else:
    try:
        from . import numba_impl as _impl
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = numpy_impl

BACKEND = "numba" if _impl is not numpy_impl else "numpy"

apsp = _impl.apsp
one_step_measures = _impl.one_step_measures
two_step_measures = _impl.two_step_measures
transport = _impl.transport
edge_costs = _impl.edge_costs


def backend_module(name):
    """Return the kernel module for ``name`` regardless of the env flag."""
    if name == "numpy":
        return numpy_impl
    if name == "numba":
        from . import numba_impl
        return numba_impl
    raise ValueError(f"unknown backend {name!r}")
