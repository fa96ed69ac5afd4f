"""Kernel backend selection.

The compiled extension (``hindsight._core``) is preferred; the pure-Python
kernel (``hindsight._pycore``) is the fallback when the extension was not
built.  Set ``HINDSIGHT_PURE_PY=1`` to force the fallback, e.g. for the
backend benchmark.  Both kernels produce bit-identical results.
"""

import os

from . import _pycore

_forced_pure = os.environ.get("HINDSIGHT_PURE_PY", "") not in ("", "0")

if _forced_pure:
    _active = _pycore
else:
    try:
        from . import _core as _active
    except ImportError:
        _active = _pycore

ACTIVE = _active


def backend_name(module=None):
    """'compiled' or 'pure-python' for the given (default: active) kernel."""
    module = module or ACTIVE
    return "pure-python" if module is _pycore else "compiled"


def available_backends():
    """Importable kernel modules, keyed by name."""
    out = {"pure-python": _pycore}
    try:
        from . import _core
        out["compiled"] = _core
    except ImportError:
        pass
    return out
