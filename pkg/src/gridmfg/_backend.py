"""Simulation kernel selection: compiled extension if available, NumPy otherwise.

Set GRIDMFG_BACKEND=numpy or GRIDMFG_BACKEND=c to force a backend; forcing
"c" raises if the extension was not built.
"""

from __future__ import annotations

import os

_requested = os.environ.get("GRIDMFG_BACKEND", "").strip().lower()

if _requested == "numpy":
    from ._euler_np import run_replication

    BACKEND = "numpy"
elif _requested == "c":
    from ._euler import run_replication  # noqa: F401 (ImportError is the contract)

    BACKEND = "c"
elif _requested == "":
    try:
        from ._euler import run_replication

        BACKEND = "c"
    except ImportError:
        from ._euler_np import run_replication

        BACKEND = "numpy"
else:
    raise ValueError(f"GRIDMFG_BACKEND must be 'c' or 'numpy', got {_requested!r}")
