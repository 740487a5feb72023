"""Select the kernel backend at import time.

The compiled Cython extension is preferred when present; the pure-numpy
module is the fallback.  Set the environment variable
``DOUBLEBRACKET_PURE_PYTHON=1`` before import to force the fallback (used by
the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("DOUBLEBRACKET_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND

bracket = _impl.bracket
double_bracket = _impl.double_bracket
brockett_rk4 = _impl.brockett_rk4


def available_backends() -> dict[str, object]:
    """Importable kernel modules keyed by backend name."""
    out: dict[str, object] = {"python": _kernels_py}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
