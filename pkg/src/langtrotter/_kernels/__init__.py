"""Kernel backend selection.

The compiled module is used when importable; set LANGTROTTER_BACKEND=python
to force the numpy implementation.
"""
import os

from . import _pykernels

SINGULAR = _pykernels.SINGULAR

_requested = os.environ.get("LANGTROTTER_BACKEND", "auto").lower()
_compiled = None
if _requested != "python":
    try:
        from . import _ckernels as _compiled
    except ImportError:
        if _requested == "c":
            raise

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["c"] = _compiled

_active = _compiled if _compiled is not None else _pykernels
BACKEND = "c" if _active is _compiled else "python"

batch_traces = _active.batch_traces
fill_trace_table = _active.fill_trace_table
box_hits = _active.box_hits
class_number = _active.class_number
trace_histogram = _active.trace_histogram

__all__ = [
    "BACKEND",
    "BACKENDS",
    "SINGULAR",
    "batch_traces",
    "box_hits",
    "class_number",
    "fill_trace_table",
    "trace_histogram",
]
