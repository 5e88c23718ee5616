"""Kernel selection: the compiled extension when importable, else the
pure-Python module.  Set ``FPF_PURE_PYTHON=1`` to force the fallback."""

from __future__ import annotations

import os

if os.environ.get("FPF_PURE_PYTHON"):
    from fpf import _pykernel as impl
else:
    try:
        from fpf import _ckernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from fpf import _pykernel as impl

BACKEND = "cython" if impl.__name__.endswith("_ckernel") else "python"
MAX_KERNEL_PRIME = 7

classify = impl.classify
run_block = impl.run_block
sample = impl.sample
zero_set_mask = impl.zero_set_mask
