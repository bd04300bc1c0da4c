"""Pure-numpy implementation of the sampled polarization-operator kernels.

Fallback for environments without the compiled extension; also the reference
the compiled kernels are tested against.  Both backends evaluate the exact
same floating-point expressions (same operation order, same clamping) so
their outputs agree to the last few ulps.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

# rows per inner block when materializing the (rows, ms+1) y-matrix
_BLOCK_ELEMS = 4_000_000


def _interp(h: np.ndarray, t: np.ndarray, n: int) -> np.ndarray:
    """Piecewise-linear interpolation of samples h on the uniform grid i/n."""
    u = t * n
    idx = u.astype(np.int64)
    np.minimum(idx, n - 1, out=idx)
    frac = u - idx
    np.minimum(frac, 1.0, out=frac)
    left = h[idx]
    return left + (h[idx + 1] - left) * frac


def bec_step(h: np.ndarray, out: np.ndarray, i0: int, i1: int) -> None:
    """Erasure-operator step: out[i] = (h(x^2) + h(2x - x^2)) / 2 on i0 <= i < i1."""
    n = h.shape[0] - 1
    i = np.arange(i0, i1, dtype=h.dtype)
    x = i / n
    a = _interp(h, x * x, n)
    b = _interp(h, x * (2.0 - x), n)
    out[i0:i1] = 0.5 * (a + b)


def bmsc_step(h: np.ndarray, out: np.ndarray, ms: int, i0: int, i1: int) -> None:
    """General-operator step with the inner max over the ms+1 point y-grid.

    y_{i,j} = x*sqrt(2-x^2) + (j/ms) * (x*(2-x) - x*sqrt(2-x^2)); the analytic
    upper endpoint x*(2-x) is evaluated once more explicitly so that float
    rounding in the grid formula cannot drop it.
    """
    n = h.shape[0] - 1
    i = np.arange(i0, i1, dtype=h.dtype)
    x = i / n
    a = _interp(h, x * x, n)
    ylo = x * np.sqrt(2.0 - x * x)
    yhi = x * (2.0 - x)
    width = yhi - ylo
    best = _interp(h, yhi, n)
    steps = np.arange(ms + 1, dtype=h.dtype) * (1.0 / ms)
    rows = max(1, _BLOCK_ELEMS // (ms + 1))
    for r0 in range(0, i1 - i0, rows):
        r1 = min(r0 + rows, i1 - i0)
        y = ylo[r0:r1, None] + steps[None, :] * width[r0:r1, None]
        vals = _interp(h, y, n)
        np.maximum(best[r0:r1], vals.max(axis=1), out=best[r0:r1])
    out[i0:i1] = 0.5 * (a + best)
