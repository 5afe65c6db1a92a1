"""Hot transfer kernels with a numba fast path and a pure-numpy fallback.

Selection is controlled by the AGEGOSSIP_BACKEND environment variable:
  auto   (default) use numba when importable, else numpy
  numba  require numba, fail loudly if missing
  numpy  force the pure-numpy path
Both backends are bit-identical by contract; tests assert it.
"""

from __future__ import annotations

import os

from ..core import ConfigError
from . import numpy_backend

_CHOICE = os.environ.get("AGEGOSSIP_BACKEND", "auto").strip().lower()

if _CHOICE in ("auto", "numba"):
    try:
        from . import numba_backend as _active
    except ImportError:
        if _CHOICE == "numba":
            raise
        _active = numpy_backend
elif _CHOICE == "numpy":
    _active = numpy_backend
else:
    raise ConfigError(
        f"AGEGOSSIP_BACKEND={_CHOICE!r} not recognized (want auto, numba or numpy)")

BACKEND_NAME = _active.NAME


def active():
    """The backend module selected at import time."""
    return _active


def get_backend(name: str):
    """Fetch a backend by name regardless of the env flag (for tests/benchmarks)."""
    name = name.strip().lower()
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        from . import numba_backend
        return numba_backend
    raise ConfigError(f"unknown backend {name!r}")


interleave_push_minislot = _active.interleave_push_minislot
interleave_pull_minislot = _active.interleave_pull_minislot
rlc_push_slot = _active.rlc_push_slot
rlc_pull_slot = _active.rlc_pull_slot
