"""Hot kernels: compiled Cython build when available, NumPy fallback otherwise.

Set ``UMEDIAN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("UMEDIAN_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None and _active is compiled_backend else "python"

costhat_many = _active.costhat_many
weiszfeld = _active.weiszfeld
greedy_cover = _active.greedy_cover
poly_advance = _active.poly_advance

__all__ = ["BACKEND", "costhat_many", "weiszfeld", "greedy_cover", "poly_advance",
           "python_backend", "compiled_backend"]
