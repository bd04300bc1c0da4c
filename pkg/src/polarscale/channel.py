"""Exact polarization arithmetic for erasure channels and interval bounds for
general binary memoryless symmetric channels.

For a binary erasure channel (BEC) with erasure probability z, the
Bhattacharyya parameter equals z and polarization acts exactly:

    worse channel:  z -> 2z - z^2        (single-step "minus" transform)
    better channel: z -> z^2             (single-step "plus" transform)

so every synthetic-channel parameter is an exact rational in the starting z.
For a general BMSC only the plus transform is exact; the minus transform is
known to land in [z*sqrt(2 - z^2), 2z - z^2], which this module tracks as a
closed rational interval with outward rounding on the irrational endpoint.

All functions here are pure; big-rational growth doubles the bit size per
polarization level, so exact enumeration is capped (default depth 20, and
code construction, which must hold all 2^n values at once, at depth 14).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import gmpy2

from .exactmath import sqrt_lower, sqrt_upper

__all__ = [
    "EXACT_DEPTH_CAP",
    "CONSTRUCT_DEPTH_CAP",
    "BhattacharyyaInterval",
    "SyntheticIndex",
    "PolarCode",
    "polar_transform_bec",
    "polar_transform_bmsc",
    "synthetic_bhattacharyya_bec",
    "synthetic_profile_bec",
    "iter_synthetic_bec",
    "construct_polar_code",
    "union_bound_pe",
    "capacity_bhattacharyya_bounds",
    "exact_expectation_bec",
    "write_synthetic_csv",
]

EXACT_DEPTH_CAP = 20
CONSTRUCT_DEPTH_CAP = 14

_mpz = gmpy2.mpz


def _check_param(z: Fraction) -> Fraction:
    z = Fraction(z)
    if not 0 <= z <= 1:
        raise ValueError(f"channel parameter {z} outside [0, 1]")
    return z


def _raw_fraction(num, den) -> Fraction:
    """Build a Fraction from an already-reduced positive-denominator pair.

    The enumeration below only ever produces coprime pairs, so the gcd pass in
    the public constructor would be wasted work on multi-kilobit integers.
    """
    f = Fraction.__new__(Fraction)
    f._numerator = int(num)
    f._denominator = int(den)
    return f


@dataclass(frozen=True)
class BhattacharyyaInterval:
    """Closed subinterval of [0,1] enclosing the Bhattacharyya parameter."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not 0 <= self.lo <= self.hi <= 1:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, z) -> "BhattacharyyaInterval":
        z = _check_param(z)
        return cls(z, z)

    def __contains__(self, z) -> bool:
        return self.lo <= Fraction(z) <= self.hi


@dataclass(frozen=True)
class SyntheticIndex:
    """Bit path (b1, ..., bn) identifying synthetic channel i, i-1 = binary(bits)."""

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != self.n:
            raise ValueError("bit path length must equal the depth")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_index(cls, n: int, index: int) -> "SyntheticIndex":
        if not 1 <= index <= 1 << n:
            raise ValueError(f"index {index} outside 1..2^{n}")
        word = index - 1
        bits = tuple((word >> (n - 1 - j)) & 1 for j in range(n))
        return cls(n, bits)

    @property
    def index(self) -> int:
        word = 0
        for b in self.bits:
            word = (word << 1) | b
        return word + 1


@dataclass(frozen=True)
class PolarCode:
    """Depth-n polar code: design parameter plus the information set."""

    n: int
    design_param: Fraction
    info_set: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "design_param", _check_param(self.design_param))
        object.__setattr__(self, "info_set", frozenset(self.info_set))
        if any(not 1 <= i <= self.block_length for i in self.info_set):
            raise ValueError("information set indices outside 1..2^n")

    @property
    def block_length(self) -> int:
        return 1 << self.n

    @property
    def rate(self) -> Fraction:
        return Fraction(len(self.info_set), self.block_length)


def polar_transform_bec(z) -> tuple[Fraction, Fraction]:
    """One exact polarization step of a BEC parameter: (2z - z^2, z^2)."""
    z = _check_param(z)
    return 2 * z - z * z, z * z


def polar_transform_bmsc(
    iv: BhattacharyyaInterval, bits: int = 128
) -> tuple[BhattacharyyaInterval, BhattacharyyaInterval]:
    """One interval polarization step for a general BMSC.

    The better (plus) child is exact: [lo^2, hi^2].  The worse (minus) child
    is enclosed by [lo*sqrt(2-lo^2) rounded down, 2hi - hi^2]; the returned
    interval is a superset of the true reachable set.
    """
    better = BhattacharyyaInterval(iv.lo * iv.lo, iv.hi * iv.hi)
    lo_sq = iv.lo * iv.lo
    worse_lo = sqrt_lower(lo_sq * (2 - lo_sq), bits)
    worse = BhattacharyyaInterval(min(worse_lo, Fraction(1)), 2 * iv.hi - iv.hi * iv.hi)
    return worse, better


def _children(p, q):
    """Exact (minus, plus) children of the reduced pair p/q; outputs reduced.

    gcd bookkeeping is unnecessary: with p and q coprime both p*(2q-p)/q^2 and
    p^2/q^2 are already in lowest terms.  Fixed points 0 and 1 are pinned to
    (0,1) and (1,1) so they never grow.
    """
    if p == 0:
        return (0, 1), (0, 1)
    if p == q:
        return (1, 1), (1, 1)
    q2 = q * q
    return (p * (2 * q - p), q2), (p * p, q2)


def iter_synthetic_bec(z0, n: int) -> Iterator[tuple[int, int, int]]:
    """Yield (index, numerator, denominator) for all 2^n synthetic channels.

    Indices run 1..2^n in order; the pair is the exact, reduced Z_n^(i)(z0).
    Depth capped at EXACT_DEPTH_CAP.
    """
    z0 = _check_param(z0)
    if n < 0:
        raise ValueError("depth must be nonnegative")
    if n > EXACT_DEPTH_CAP:
        raise ValueError(f"depth {n} exceeds the exact-enumeration cap {EXACT_DEPTH_CAP}")
    counter = [1]

    def rec(p, q, d):
        if d == n:
            idx = counter[0]
            counter[0] += 1
            yield idx, int(p), int(q)
            return
        (mn, md), (pn, pd) = _children(p, q)
        yield from rec(mn, md, d + 1)
        yield from rec(pn, pd, d + 1)

    yield from rec(_mpz(z0.numerator), _mpz(z0.denominator), 0)


def synthetic_bhattacharyya_bec(z0, idx: SyntheticIndex | Sequence[int]) -> Fraction:
    """Exact Z_n^(i) for the BEC: apply bits in order, 0 -> 2z-z^2, 1 -> z^2."""
    z0 = _check_param(z0)
    bits = idx.bits if isinstance(idx, SyntheticIndex) else tuple(idx)
    p, q = _mpz(z0.numerator), _mpz(z0.denominator)
    for b in bits:
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        minus, plus = _children(p, q)
        p, q = plus if b else minus
    return _raw_fraction(p, q)


def synthetic_profile_bec(z0, n: int) -> list[Fraction]:
    """All 2^n exact synthetic parameters, list position i-1 = index i."""
    return [_raw_fraction(p, q) for _, p, q in iter_synthetic_bec(z0, n)]


def construct_polar_code(z0, n: int, k: int) -> PolarCode:
    """Pick the k indices with smallest Z_n^(i)(z0); ties go to the smaller index."""
    z0 = _check_param(z0)
    if n > CONSTRUCT_DEPTH_CAP:
        raise ValueError(
            f"construction holds all 2^n exact rationals; depth {n} exceeds cap "
            f"{CONSTRUCT_DEPTH_CAP}"
        )
    if not 0 <= k <= 1 << n:
        raise ValueError(f"info-bit count {k} outside 0..2^{n}")
    profile = synthetic_profile_bec(z0, n)
    ranked = sorted(range(1, (1 << n) + 1), key=lambda i: (profile[i - 1], i))
    return PolarCode(n=n, design_param=z0, info_set=frozenset(ranked[:k]))


def union_bound_pe(code: PolarCode, z=None) -> Fraction:
    """Exact union bound on block error: sum of Z_n^(i) over the information set.

    Evaluated at the design parameter unless ``z`` overrides the transmission
    channel (the information set stays fixed, which is the error-floor setting).
    """
    z = code.design_param if z is None else _check_param(z)
    if not code.info_set:
        return Fraction(0)
    total = Fraction(0)
    for idx, p, q in iter_synthetic_bec(z, code.n):
        if idx in code.info_set:
            total += _raw_fraction(p, q)
    return total


@dataclass(frozen=True)
class CapacityBounds:
    """Enclosure of I(W) from Z(W): 1-z <= I <= sqrt(1-z^2); exact for a BEC."""

    lo: Fraction
    hi: Fraction
    bec_exact: bool


def capacity_bhattacharyya_bounds(z, bits: int = 128) -> CapacityBounds:
    """Capacity enclosure [1-z, sqrt(1-z^2)] with the root rounded outward.

    For a BEC the capacity is exactly 1-z, which the ``bec_exact`` flag records.
    """
    z = _check_param(z)
    lo = 1 - z
    hi = sqrt_upper(1 - z * z, bits)
    return CapacityBounds(lo=lo, hi=min(hi, Fraction(1)), bec_exact=True)


def exact_expectation_bec(z0, n: int, f: Callable[[Fraction], object], cap: int = EXACT_DEPTH_CAP):
    """Mean of f over all 2^n exact synthetic parameters (the uniform-path law).

    If f returns Fractions the mean is exact; float results are combined with
    compensated summation.
    """
    z0 = _check_param(z0)
    if n > cap:
        raise ValueError(f"depth {n} exceeds cap {cap}")
    values = [f(_raw_fraction(p, q)) for _, p, q in iter_synthetic_bec(z0, n)]
    if values and all(isinstance(v, Fraction) for v in values):
        return sum(values, Fraction(0)) / (1 << n)
    return math.fsum(float(v) for v in values) / (1 << n)


def write_synthetic_csv(path, z0, n: int) -> None:
    """Dump the depth-n profile as CSV: index,bits,z_exact_num,z_exact_den,z_float."""
    z0 = _check_param(z0)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "bits", "z_exact_num", "z_exact_den", "z_float"])
        for idx, p, q in iter_synthetic_bec(z0, n):
            bits = format(idx - 1, f"0{n}b") if n else ""
            writer.writerow([idx, bits, p, q, repr(p / q)])
