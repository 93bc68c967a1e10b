"""Backend selection for the hot integration loops.

Prefers the compiled extension ``liepid._speedups``; falls back to the
pure-Python twin ``liepid._pyloops`` when the extension is missing or when
``LIEPID_PURE_PYTHON=1`` is set in the environment.  ``BACKEND`` records
which one is active.
"""

import os

__all__ = ["BACKEND", "pendulum_loop", "vehicle_nominal_loop",
           "vehicle_integral_loop", "rotating_frame_loop", "available_backends"]

BACKEND = "python"
if os.environ.get("LIEPID_PURE_PYTHON", "") not in ("1", "true"):
    try:
        from ._speedups import (pendulum_loop, rotating_frame_loop,
                                vehicle_integral_loop, vehicle_nominal_loop)
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pyloops import (pendulum_loop, rotating_frame_loop,  # noqa: F811
                           vehicle_integral_loop, vehicle_nominal_loop)


def available_backends() -> dict:
    """Importable loop modules keyed by backend name (for benchmarking)."""
    from . import _pyloops
    backends = {"python": _pyloops}
    try:
        from . import _speedups
        backends["cython"] = _speedups
    except ImportError:
        pass
    return backends
