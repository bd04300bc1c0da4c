"""polarscale: certified scaling-exponent bounds and polarization analysis
for polar codes over binary memoryless symmetric channels.

Highlights:

* exact rational polarization arithmetic for erasure channels and interval
  polarization bounds for general channels (``channel``),
* a compiled (with pure-numpy fallback) iteration of the polarization
  operators toward their dominant nontrivial eigenfunction (``iteration``),
* an exact-rational certification pipeline producing provable upper bounds
  on the scaling exponent with replayable integer transcripts (``candidate``,
  ``certify``, ``transcript``),
* the explicit constant chain, moderate-deviations trade-off, error-floor
  domination checks, and an exact SC-decoding Monte Carlo (``constants``,
  ``tradeoff``, ``floors``, ``simulate``).
"""

from .candidate import CandidateFunction, build_candidate
from .certify import CertificationError, CertifiedBound, certify
from .channel import (
    BhattacharyyaInterval,
    PolarCode,
    SyntheticIndex,
    capacity_bhattacharyya_bounds,
    construct_polar_code,
    exact_expectation_bec,
    polar_transform_bec,
    polar_transform_bmsc,
    synthetic_bhattacharyya_bec,
    synthetic_profile_bec,
    union_bound_pe,
)
from .constants import ChainConstants, chain_constants
from .iteration import IterationConfig, IterationResult, SampledFunction, iterate
from .simulate import SimConfig, SimResult, sc_erasure_propagate, simulate
from .tradeoff import TradeoffPoint, h2, h2_inv, joint_constants, tradeoff_point
from .transcript import verify_transcript

__version__ = "0.1.0"

__all__ = [
    "BhattacharyyaInterval",
    "CandidateFunction",
    "CertificationError",
    "CertifiedBound",
    "IterationConfig",
    "IterationResult",
    "PolarCode",
    "SampledFunction",
    "SimConfig",
    "SimResult",
    "SyntheticIndex",
    "ChainConstants",
    "TradeoffPoint",
    "build_candidate",
    "capacity_bhattacharyya_bounds",
    "certify",
    "construct_polar_code",
    "exact_expectation_bec",
    "h2",
    "h2_inv",
    "iterate",
    "joint_constants",
    "polar_transform_bec",
    "polar_transform_bmsc",
    "sc_erasure_propagate",
    "simulate",
    "synthetic_bhattacharyya_bec",
    "synthetic_profile_bec",
    "chain_constants",
    "tradeoff_point",
    "union_bound_pe",
    "verify_transcript",
]
