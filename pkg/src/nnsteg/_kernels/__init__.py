"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the fallback.
Both expose the same functions and produce bit-identical results.  Set
``NNSTEG_BACKEND=python`` (or ``=c``) to force a backend; forcing ``c`` when
the extension is missing raises immediately rather than falling back.
"""

import os

_forced = os.environ.get("NNSTEG_BACKEND", "").strip().lower()

if _forced == "python":
    from nnsteg._kernels import pykernels as impl
elif _forced == "c":
    from nnsteg._kernels import _ckernels as impl
elif _forced:
    raise ValueError(f"NNSTEG_BACKEND must be 'c' or 'python', not {_forced!r}")
else:
    try:
        from nnsteg._kernels import _ckernels as impl
    except ImportError:
        from nnsteg._kernels import pykernels as impl

forward_batch = impl.forward_batch
grad_one = impl.grad_one
sgd_epoch = impl.sgd_epoch
hill_climb = impl.hill_climb


def backend_name() -> str:
    """Name of the active backend: 'c' (compiled) or 'python' (fallback)."""
    return impl.BACKEND_NAME
