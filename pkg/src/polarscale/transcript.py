"""Machine-checkable transcripts of certified inequalities.

Every line is self-contained:

    ASSERT <human-readable claim> VIA <KIND> <integers...>

and the VIA payload alone determines an exact big-integer comparison that the
replayer re-executes from scratch.  Kinds:

    CROSS a b c d        claim a/b <= c/d          check a*d <= c*b
    POWUB bn bd p q rn rd  claim (bn/bd)^(p/q) <= rn/rd
                                                   check bn^p * rd^q <= rn^q * bd^p
    POWLB bn bd p q rn rd  claim rn/rd <= (bn/bd)^(p/q)
                                                   check rn^q * bd^p <= bn^p * rd^q
    SQRTLB un ud sn sd   claim sn/sd <= sqrt(un/ud) check sn^2 * ud <= un * sd^2
    SQRTUB un ud sn sd   claim sn/sd >= sqrt(un/ud) check sn^2 * ud >= un * sd^2
    MULB a b q p         claim a/b <= 2^(-q/p)      check a^p * 2^q <= b^p

All exponents are positive in the payload (claims are normalized before being
recorded).  Files may be gzip-compressed (suffix ``.gz``); ``#`` lines are
comments.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable

import gmpy2

__all__ = ["Transcript", "TranscriptError", "replay_line", "verify_transcript"]

_mpz = gmpy2.mpz


class TranscriptError(ValueError):
    pass


def _fr(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


@dataclass
class Transcript:
    """Collects certified inequalities; every record is checked as it is added."""

    meta: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)

    def _add(self, claim: str, kind: str, ints: Iterable[int]) -> None:
        payload = " ".join(str(int(v)) for v in ints)
        line = f"ASSERT {claim} VIA {kind} {payload}"
        ok, _ = replay_line(line)
        if not ok:
            raise TranscriptError(f"internal certification failure: {line[:200]}")
        self.lines.append(line)

    def cross(self, lhs: Fraction, rhs: Fraction) -> None:
        """Record and check lhs <= rhs for exact rationals."""
        a, b = lhs.numerator, lhs.denominator
        c, d = rhs.numerator, rhs.denominator
        self._add(f"{a}/{b} <= {c}/{d}", "CROSS", (a, b, c, d))

    def pow_upper(self, base: Fraction, exp: Fraction, bound: Fraction) -> None:
        """Record and check base**exp <= bound (exp normalized positive)."""
        base, exp = _normalize_pow(base, exp)
        self._add(
            f"pow({_fr(base)},{_fr(exp)}) <= {_fr(bound)}",
            "POWUB",
            (base.numerator, base.denominator, exp.numerator, exp.denominator,
             bound.numerator, bound.denominator),
        )

    def pow_lower(self, base: Fraction, exp: Fraction, bound: Fraction) -> None:
        """Record and check bound <= base**exp."""
        base, exp = _normalize_pow(base, exp)
        self._add(
            f"{_fr(bound)} <= pow({_fr(base)},{_fr(exp)})",
            "POWLB",
            (base.numerator, base.denominator, exp.numerator, exp.denominator,
             bound.numerator, bound.denominator),
        )

    def sqrt_lower(self, value: Fraction, bound: Fraction) -> None:
        self._add(
            f"{_fr(bound)} <= sqrt({_fr(value)})",
            "SQRTLB",
            (value.numerator, value.denominator, bound.numerator, bound.denominator),
        )

    def sqrt_upper(self, value: Fraction, bound: Fraction) -> None:
        self._add(
            f"{_fr(bound)} >= sqrt({_fr(value)})",
            "SQRTUB",
            (value.numerator, value.denominator, bound.numerator, bound.denominator),
        )

    def mu_bound(self, sup_bound: Fraction, mu: Fraction) -> None:
        """Record and check sup_bound <= 2**(-1/mu) for mu = p/q."""
        a, b = sup_bound.numerator, sup_bound.denominator
        p, q = mu.numerator, mu.denominator
        self._add(f"{a}/{b} <= 2^-({q}/{p})", "MULB", (a, b, q, p))

    def write(self, path) -> None:
        opener = gzip.open if str(path).endswith(".gz") else open
        with opener(path, "wt") as fh:  # type: IO[str]
            fh.write("# polarscale certification transcript v1\n")
            for key in sorted(self.meta):
                fh.write(f"# {key}={self.meta[key]}\n")
            fh.write("\n".join(self.lines))
            fh.write("\n")


def _normalize_pow(base: Fraction, exp: Fraction) -> tuple[Fraction, Fraction]:
    if exp < 0:
        if base == 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return 1 / base, -exp
    return base, exp


def replay_line(line: str) -> tuple[bool, str]:
    """Re-verify one ASSERT line by independent integer arithmetic.

    Returns (holds, kind).  Raises TranscriptError on malformed input.
    """
    try:
        _, via = line.split(" VIA ", 1)
        parts = via.split()
        kind, ints = parts[0], [int(v) for v in parts[1:]]
    except (ValueError, IndexError) as exc:
        raise TranscriptError(f"malformed transcript line: {line[:120]!r}") from exc
    if kind == "CROSS":
        a, b, c, d = ints
        if b <= 0 or d <= 0:
            raise TranscriptError("nonpositive denominator in CROSS")
        return _mpz(a) * d <= _mpz(c) * b, kind
    if kind in ("POWUB", "POWLB"):
        bn, bd, p, q, rn, rd = ints
        if min(bd, q, rd) <= 0 or p <= 0 or bn < 0 or rn < 0:
            raise TranscriptError(f"invalid payload in {kind}")
        lhs = (_mpz(bn) ** p) * (_mpz(rd) ** q)
        rhs = (_mpz(rn) ** q) * (_mpz(bd) ** p)
        return (lhs <= rhs, kind) if kind == "POWUB" else (rhs <= lhs, kind)
    if kind in ("SQRTLB", "SQRTUB"):
        un, ud, sn, sd = ints
        if ud <= 0 or sd <= 0 or un < 0 or sn < 0:
            raise TranscriptError(f"invalid payload in {kind}")
        lhs = _mpz(sn) * sn * ud
        rhs = _mpz(un) * sd * sd
        return (lhs <= rhs, kind) if kind == "SQRTLB" else (lhs >= rhs, kind)
    if kind == "MULB":
        a, b, q, p = ints
        if b <= 0 or p <= 0 or q <= 0 or a < 0:
            raise TranscriptError("invalid payload in MULB")
        return (_mpz(a) ** p) << q <= _mpz(b) ** p, kind
    raise TranscriptError(f"unknown transcript kind {kind!r}")


def verify_transcript(path) -> tuple[int, list[tuple[int, str]]]:
    """Replay every ASSERT line in the file; return (checked, failures).

    Failures are (line number, line) pairs; an empty list means the whole
    transcript re-verified.
    """
    opener = gzip.open if str(path).endswith(".gz") else open
    checked = 0
    failures: list[tuple[int, str]] = []
    with opener(path, "rt") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not line.startswith("ASSERT "):
                raise TranscriptError(f"line {lineno}: expected ASSERT, got {line[:60]!r}")
            ok, _ = replay_line(line)
            checked += 1
            if not ok:
                failures.append((lineno, line))
    return checked, failures
