"""Sampled iteration of the polarization operators toward their dominant
nontrivial eigenfunction.

The operator acting on a function g over [0,1] is, per grid point x:

    erasure ("bec"):   (g(x^2) + g(2x - x^2)) / 2
    general ("bmsc"):  (g(x^2) + max_y g(y)) / 2,   y over the ms+1 point grid
                       spanning [x*sqrt(2-x^2), 2x - x^2]

Samples live on the uniform grid x_i = i/ns; off-grid evaluations use linear
interpolation of the current samples.  After every step the samples are
renormalized to maximum 1, and the ratio

    rhat_k = max_{0 < i < ns} (h_k(x_i^2) + max_y h_k(y)) / (2 h_k(x_i))

is recorded.  rhat is a grid maximum, hence a *lower* estimate of the true
supremum ratio; the certified upper bound lives in ``certify``.

The iteration itself is heuristic floating point (float64 by default); only
its output samples feed the exact certification stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels

__all__ = [
    "SampledFunction",
    "IterationConfig",
    "IterationResult",
    "inner_y_grid",
    "initial_samples",
    "apply_operator",
    "max_ratio",
    "iterate",
]


@dataclass
class SampledFunction:
    """Samples of a [0,1] -> [0,1] function on the uniform grid i/ns.

    Endpoints are pinned to zero and the interior maximum is 1 after
    normalization.
    """

    ns: int
    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if self.ns < 2:
            raise ValueError("grid size must be at least 2")
        if self.samples.shape != (self.ns + 1,):
            raise ValueError("need ns + 1 samples")
        if self.samples[0] != 0 or self.samples[self.ns] != 0:
            raise ValueError("endpoint samples must be zero")
        if np.any(self.samples < 0):
            raise ValueError("samples must be nonnegative")

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.ns + 1, dtype=self.samples.dtype) / self.ns


@dataclass
class IterationConfig:
    ns: int
    ms: int
    k: int
    init_exponent: Fraction
    operator: str
    dtype: str = "float64"
    backend: str | None = None
    threads: int = 1

    def __post_init__(self):
        self.init_exponent = Fraction(self.init_exponent)
        if self.ns < 2 or self.ms < 1 or self.k < 1:
            raise ValueError("need ns >= 2, ms >= 1, k >= 1")
        if not 0 < self.init_exponent < 1:
            raise ValueError("initial exponent must lie in (0, 1)")
        if self.operator not in ("bec", "bmsc"):
            raise ValueError(f"operator must be 'bec' or 'bmsc', got {self.operator!r}")


@dataclass
class IterationResult:
    h_final: SampledFunction
    rhat_trace: list[float] = field(default_factory=list)

    @property
    def rhat(self) -> float:
        return self.rhat_trace[-1]


def inner_y_grid(x: float, ms: int) -> np.ndarray:
    """The ms+1 evaluation points y_j = x*sqrt(2-x^2) + (j/ms)*(x*(2-x) - x*sqrt(2-x^2))."""
    if ms < 1:
        raise ValueError("ms must be >= 1")
    ylo = x * np.sqrt(2.0 - x * x)
    yhi = x * (2.0 - x)
    j = np.arange(ms + 1, dtype=np.float64)
    return ylo + (j * (1.0 / ms)) * (yhi - ylo)


def initial_samples(cfg: IterationConfig) -> SampledFunction:
    """Normalized samples of (x(1-x))**init_exponent on the grid."""
    x = np.arange(cfg.ns + 1, dtype=cfg.dtype) / cfg.ns
    f0 = np.power(x * (1 - x), float(cfg.init_exponent))
    f0 /= f0.max()
    return SampledFunction(cfg.ns, f0)


def _step(h: SampledFunction, cfg: IterationConfig) -> np.ndarray:
    return kernels.run_step(
        h.samples, cfg.operator, ms=cfg.ms, threads=cfg.threads, backend=cfg.backend
    )


def apply_operator(h: SampledFunction, cfg: IterationConfig) -> SampledFunction:
    """One operator application followed by max-normalization."""
    f = _step(h, cfg)
    top = f.max()
    if top <= 0:
        raise ValueError("operator output is identically zero; cannot normalize")
    return SampledFunction(h.ns, f / top)


def max_ratio(f_next: np.ndarray, h: np.ndarray) -> float:
    """max over interior grid points of f_next/h, the rhat statistic.

    f_next must be the un-normalized operator output for the samples h.
    Interior zeros of h are excluded from the ratio (they cannot occur for
    positive interior input).
    """
    num = f_next[1:-1]
    den = h[1:-1]
    mask = den > 0
    if not np.any(mask):
        raise ValueError("no positive interior samples")
    return float(np.max(num[mask] / den[mask]))


def iterate(cfg: IterationConfig) -> IterationResult:
    """Run k normalized steps; record rhat after each.

    rhat of step j is extracted from the following un-normalized application
    (the normalizing constant cancels in the ratio), so the whole run costs
    k+1 kernel passes.
    """
    h = initial_samples(cfg)
    f = _step(h, cfg)
    trace: list[float] = []
    for _ in range(cfg.k):
        top = f.max()
        if top <= 0:
            raise ValueError("operator output is identically zero; cannot normalize")
        h = SampledFunction(cfg.ns, f / top)
        f = _step(h, cfg)
        trace.append(max_ratio(f, h.samples))
    return IterationResult(h_final=h, rhat_trace=trace)
