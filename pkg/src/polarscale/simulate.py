"""Monte Carlo successive-cancellation decoding over the erasure channel.

For a BEC, SC decoding admits an exact per-pattern computation: a synthetic
channel is erased iff the polarization recursion over erasure indicators says
so ("minus" child erased iff either input erased, "plus" child erased iff
both), and bit i fails exactly when synthetic channel i is erased.  A block
decode fails iff any information position is erased, so the simulation is an
exact Monte Carlo of the true SC block error rate, with no soft values.

Randomness comes from the counter-based Philox generator (identifier stored
in results), so runs are reproducible across platforms and trials could be
split across workers by splitting the counter space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import PolarCode

__all__ = [
    "GENERATOR_ID",
    "SimConfig",
    "SimResult",
    "wilson_interval",
    "synthetic_erasure_indicators",
    "sc_erasure_propagate",
    "simulate",
    "per_bit_failure_counts",
]

GENERATOR_ID = "philox4x64"
_BLOCK_ELEMS = 1 << 25


@dataclass(frozen=True)
class SimConfig:
    code: PolarCode
    z: Fraction
    trials: int
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "z", Fraction(self.z))
        if not 0 <= self.z <= 1:
            raise ValueError("erasure probability outside [0, 1]")
        if self.trials < 1:
            raise ValueError("need at least one trial")


@dataclass(frozen=True)
class SimResult:
    trials: int
    errors: int
    point_estimate: float
    ci_lo: float
    ci_hi: float
    seed: int
    generator_id: str = GENERATOR_ID

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "errors": self.errors,
            "estimate": self.point_estimate,
            "ci_lo": self.ci_lo,
            "ci_hi": self.ci_hi,
            "seed": self.seed,
            "generator_id": self.generator_id,
        }


def wilson_interval(errors: int, trials: int, score: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 95%)."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError("invalid (errors, trials)")
    p_hat = errors / trials
    s2 = score * score
    denom = 1 + s2 / trials
    center = (p_hat + s2 / (2 * trials)) / denom
    half = score * math.sqrt(p_hat * (1 - p_hat) / trials + s2 / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, center - half)
    hi = 1.0 if errors == trials else min(1.0, center + half)
    return lo, hi


def synthetic_erasure_indicators(patterns: np.ndarray) -> np.ndarray:
    """Map channel-use erasure patterns to synthetic-channel erasure flags.

    ``patterns`` is a (trials, 2^n) boolean array.  Column t of the output
    flags synthetic index t+1 (bit path = binary of t): at each level the
    minus child is erased iff either pairmate is, the plus child iff both.
    """
    patterns = np.asarray(patterns, dtype=bool)
    trials, width = patterns.shape
    if width & (width - 1):
        raise ValueError("pattern length must be a power of two")
    arr = patterns[:, None, :]
    while arr.shape[2] > 1:
        a0 = arr[:, :, 0::2]
        a1 = arr[:, :, 1::2]
        arr = np.stack([a0 | a1, a0 & a1], axis=2).reshape(
            trials, 2 * arr.shape[1], arr.shape[2] // 2
        )
    return arr[:, :, 0]


def sc_erasure_propagate(pattern, code: PolarCode) -> bool:
    """Exact SC outcome for one erasure pattern: True iff the block decodes.

    Fails iff some information index is erased after the indicator recursion.
    """
    pattern = np.asarray(pattern, dtype=bool)
    if pattern.shape != (code.block_length,):
        raise ValueError(
            f"pattern length {pattern.shape} does not match block length {code.block_length}"
        )
    flags = synthetic_erasure_indicators(pattern[None, :])[0]
    info = np.array(sorted(code.info_set), dtype=np.int64) - 1
    return not bool(flags[info].any())


def _pattern_blocks(cfg: SimConfig):
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    n_block = cfg.code.block_length
    rows = max(1, _BLOCK_ELEMS // n_block)
    z = float(cfg.z)
    done = 0
    while done < cfg.trials:
        take = min(rows, cfg.trials - done)
        yield rng.random((take, n_block)) < z
        done += take


def simulate(cfg: SimConfig) -> SimResult:
    """Monte Carlo block-error estimate with a Wilson 95% interval."""
    info = np.array(sorted(cfg.code.info_set), dtype=np.int64) - 1
    errors = 0
    for block in _pattern_blocks(cfg):
        if info.size:
            flags = synthetic_erasure_indicators(block)
            errors += int(flags[:, info].any(axis=1).sum())
    lo, hi = wilson_interval(errors, cfg.trials)
    return SimResult(
        trials=cfg.trials,
        errors=errors,
        point_estimate=errors / cfg.trials,
        ci_lo=lo,
        ci_hi=hi,
        seed=cfg.seed,
    )


def per_bit_failure_counts(cfg: SimConfig) -> np.ndarray:
    """Erasure counts per synthetic index over the trials (for all 2^n indices)."""
    counts = np.zeros(cfg.code.block_length, dtype=np.int64)
    for block in _pattern_blocks(cfg):
        counts += synthetic_erasure_indicators(block).sum(axis=0)
    return counts
