"""Backend selection for the hot loops.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``ALPHAGAN_PURE_PYTHON`` is set to a non-empty value,
the numpy implementations are used. ``BACKEND`` names the active one.
"""

import os

from . import _kernels_py

compiled = None
if not os.environ.get("ALPHAGAN_PURE_PYTHON"):
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

if compiled is not None:
    BACKEND = "cython"
    brute_force_argmax = compiled.brute_force_argmax
    margin_golden = compiled.margin_golden
else:
    BACKEND = "python"
    brute_force_argmax = _kernels_py.brute_force_argmax
    margin_golden = _kernels_py.margin_golden

python = _kernels_py

__all__ = ["BACKEND", "brute_force_argmax", "margin_golden", "compiled", "python"]
