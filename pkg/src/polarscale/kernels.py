"""Backend dispatch for the step kernels: compiled extension when available,
numpy fallback otherwise.

Selection order: explicit ``backend=`` argument, then the POLARSCALE_BACKEND
environment variable, then "cython" if the extension imported, else "numpy".
Threaded execution splits the grid into fixed chunks with disjoint output
slices, so results are identical for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_np

try:
    from . import _kernels as _kernels_ext
except ImportError:  # pragma: no cover - depends on the build environment
    _kernels_ext = None

_BACKENDS = {"numpy": _kernels_np}
if _kernels_ext is not None:
    _BACKENDS["cython"] = _kernels_ext

_CHUNK = 8192


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def default_backend() -> str:
    env = os.environ.get("POLARSCALE_BACKEND")
    if env:
        if env not in _BACKENDS:
            raise ValueError(
                f"POLARSCALE_BACKEND={env!r} not available; have {available_backends()}"
            )
        return env
    return "cython" if "cython" in _BACKENDS else "numpy"


def get_backend(name: str | None = None):
    if name is None:
        name = default_backend()
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; have {available_backends()}") from None


def run_step(
    h: np.ndarray,
    operator: str,
    ms: int = 0,
    threads: int = 1,
    backend: str | None = None,
) -> np.ndarray:
    """Apply one un-normalized operator step to the samples h, returning f.

    ``operator`` is "bec" or "bmsc"; ``ms`` is the inner y-grid resolution for
    the bmsc operator.  The float64 kernels require float64 input; other
    dtypes are routed to the numpy backend in the matching precision.
    """
    if operator not in ("bec", "bmsc"):
        raise ValueError(f"operator must be 'bec' or 'bmsc', got {operator!r}")
    if operator == "bmsc" and ms < 1:
        raise ValueError("bmsc operator needs ms >= 1")
    n1 = h.shape[0]
    if h.dtype != np.float64:
        mod = _kernels_np
    else:
        mod = get_backend(backend)
    out = np.empty_like(h)
    step = mod.bec_step if operator == "bec" else mod.bmsc_step

    def call(a, b):
        if operator == "bec":
            step(h, out, a, b)
        else:
            step(h, out, ms, a, b)

    if threads <= 1 or n1 < 2 * _CHUNK:
        call(0, n1)
    else:
        spans = [(a, min(a + _CHUNK, n1)) for a in range(0, n1, _CHUNK)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda ab: call(*ab), spans))
    return out
