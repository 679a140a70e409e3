"""Hot inner loops, with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and the environment
variable ``SKEWPROLONG_DISABLE_JIT`` is unset (or ``0``).  Both paths expose
the same functions and are interchangeable; ``numpy_impl`` and
``numba_impl`` give explicit access for tests and benchmarks.

Bilinear maps between coefficient spaces are encoded as *structure tables*:
four equal-length arrays ``(a, b, out, sign)`` meaning

    B(x, y)[out[t]] += sign[t] * x[a[t]] * y[b[t]]

summed over table rows ``t``.
"""

import os

from . import _numpy as numpy_impl

try:
    from . import _numba as numba_impl
except ImportError:  # numba missing or broken
    numba_impl = None

JIT_ENABLED = numba_impl is not None and os.environ.get(
    "SKEWPROLONG_DISABLE_JIT", "0"
).strip().lower() in ("", "0", "false", "no")

_impl = numba_impl if JIT_ENABLED else numpy_impl

bilinear_apply = _impl.bilinear_apply
bilinear_fix_right = _impl.bilinear_fix_right
bilinear_fix_left = _impl.bilinear_fix_left
bilinear_adjoint = _impl.bilinear_adjoint
gram_schmidt = _impl.gram_schmidt
nlie_jacobi_residual = _impl.nlie_jacobi_residual

__all__ = [
    "JIT_ENABLED",
    "numpy_impl",
    "numba_impl",
    "bilinear_apply",
    "bilinear_fix_right",
    "bilinear_fix_left",
    "bilinear_adjoint",
    "gram_schmidt",
    "nlie_jacobi_residual",
]
