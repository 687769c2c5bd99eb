"""Select the compiled kernels when available, else the pure-Python ones.

Set ``MAXMULT_PURE=1`` to force the fallback (used by the parity tests and
the benchmark).
"""

import os

if os.environ.get("MAXMULT_PURE"):
    from maxmult import _pykernels as impl
    BACKEND = "python"
else:
    try:
        from maxmult import _ckernels as impl
        BACKEND = "cython"
    except ImportError:
        from maxmult import _pykernels as impl
        BACKEND = "python"

mul_dicts = impl.mul_dicts
add_dicts = impl.add_dicts
divides = impl.divides
sub_mul = impl.sub_mul
normal_form = impl.normal_form
