"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
fallback is bit-identical and used otherwise. Set MATDIST_DISABLE_EXTENSION=1
to force the fallback (the benchmark and the parity tests import both
backends directly).
"""

import os

from . import _kernels_py

if os.environ.get("MATDIST_DISABLE_EXTENSION"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

# Scalar helpers are always the Python ones (identical by contract).
MASK64 = _kernels_py.MASK64
GAMMA = _kernels_py.GAMMA
mix64 = _kernels_py.mix64
draw_u64 = _kernels_py.draw_u64

sample_indices = _impl.sample_indices
fill_codes = _impl.fill_codes
joint_counts = _impl.joint_counts
