"""Backend selection for the Viterbi kernel.

The compiled extension is preferred when it imports; otherwise the pure
Python twin is used. Set ZAKMUB_PURE_PYTHON=1 to force the fallback (used
by the benchmark and the backend-equivalence tests).
"""

import os

if os.environ.get("ZAKMUB_PURE_PYTHON"):
    from ._viterbi_py import BACKEND, viterbi_path
else:
    try:
        from ._viterbi_c import BACKEND, viterbi_path
    except ImportError:
        from ._viterbi_py import BACKEND, viterbi_path

__all__ = ["BACKEND", "viterbi_path"]
