"""Select the Monte Carlo kernel backend at import time.

The compiled Cython module is used when present. Setting the environment
variable ``DIRNET_BACKEND=python`` forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if os.environ.get("DIRNET_BACKEND", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]
interference = _impl.interference
degree_counts = _impl.degree_counts


def get(name=None):
    """Kernel module by name; ``None`` returns the active one."""
    return BACKENDS[name or BACKEND]
