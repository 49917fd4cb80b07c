"""Backend selection for the S-matrix kernel.

The compiled Cython extension is used when it was built; otherwise the
NumPy implementation is used. Setting ``CURVEWIRE_PURE_PYTHON=1`` forces
the fallback.
"""
import os

from . import _kernels_py

_compiled = None
if os.environ.get("CURVEWIRE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
AVAILABLE = {"numpy": _kernels_py.smatrix_batch}
if _compiled is not None:
    AVAILABLE["cython"] = _compiled.smatrix_batch


def smatrix_batch(onsite, hopping, t0, energies, backend=None):
    """S-matrices of shape ``(m, 2, 2)``, ordered ``[[r_l, t_r], [t_l, r_r]]``."""
    fn = AVAILABLE[backend or BACKEND]
    return fn(onsite, hopping, t0, energies)
