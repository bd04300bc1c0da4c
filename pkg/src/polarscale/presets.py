"""Named parameter bundles for the iteration + certification pipeline.

The ``paper-*`` presets are the full-scale runs behind the headline exponent
bounds (hours of compute; certified mu <= 4.714 general / 3.639 erasure);
the ``desk-*`` presets are the per-commit surrogates (minutes; certified
mu < 5.0 general / < 3.8 erasure).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["CertifyPreset", "PRESETS"]


@dataclass(frozen=True)
class CertifyPreset:
    operator: str
    ns: int
    ms: int
    k: int
    init_exponent: Fraction
    eta: Fraction
    m_bar: int
    delta_s: Fraction


PRESETS = {
    "paper-bmsc": CertifyPreset(
        operator="bmsc",
        ns=1_000_000,
        ms=10_000,
        k=100,
        init_exponent=Fraction(3, 4),
        eta=Fraction(78, 100),
        m_bar=13,
        delta_s=Fraction(1, 10_000),
    ),
    "paper-bec": CertifyPreset(
        operator="bec",
        ns=1_000_000,
        ms=10_000,
        k=100,
        init_exponent=Fraction(2, 3),
        eta=Fraction(72, 100),
        m_bar=5,
        delta_s=Fraction(1, 10_000),
    ),
    "desk-bmsc": CertifyPreset(
        operator="bmsc",
        ns=100_000,
        ms=1_000,
        k=100,
        init_exponent=Fraction(3, 4),
        eta=Fraction(78, 100),
        m_bar=13,
        delta_s=Fraction(1, 10_000),
    ),
    "desk-bec": CertifyPreset(
        operator="bec",
        ns=100_000,
        ms=1_000,
        k=100,
        init_exponent=Fraction(2, 3),
        eta=Fraction(72, 100),
        m_bar=5,
        delta_s=Fraction(1, 10_000),
    ),
}
