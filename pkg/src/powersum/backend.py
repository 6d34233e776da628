"""Kernel backend selection.

The hot inner loops (power sweeps, smoothed-max objective, descent) exist
twice: a compiled Cython extension (powersum._kernels) and a pure-numpy
fallback (powersum._kernels_py) with the identical interface.  The compiled
one is preferred when importable; set POWERSUM_BACKEND=python or =compiled
to force a choice.  benchmarks/bench_kernels.py compares the two.
"""
import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_choice = os.environ.get("POWERSUM_BACKEND", "auto").strip().lower()
if _choice in ("", "auto"):
    _impl = _compiled if _compiled is not None else _kernels_py
elif _choice in ("python", "numpy"):
    _impl = _kernels_py
elif _choice in ("compiled", "cython", "c"):
    if _compiled is None:
        raise ImportError(
            "POWERSUM_BACKEND=compiled requested but powersum._kernels is not "
            "built; run `pip install -e . --no-build-isolation` or unset the variable"
        )
    _impl = _compiled
else:
    raise ValueError(f"unrecognized POWERSUM_BACKEND value {_choice!r}")

BACKEND = _impl.BACKEND_NAME
RENORM_EVERY = _impl.RENORM_EVERY

sweep_max = _impl.sweep_max
sweep_abs_sq = _impl.sweep_abs_sq
lse_objective = _impl.lse_objective
descent_run = _impl.descent_run


def available_backends() -> dict:
    """Name -> module for every importable backend (for tests and benchmarks)."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
