"""Exact-rational certification of an upper bound on the supremum ratio, and
hence on the scaling exponent.

Given a rational candidate h (see ``candidate``), the supremum over (0,1) of

    r(x) = (h(x^2) + sup_y h(y)) / (2 h(x)),   y in [x*sqrt(2-x^2), 2x-x^2]

is bounded by the maximum of three certified quantities:

* H0, covering x in [0, 1/ns], from the left power tail;
* H1, covering x in [1-1/ns, 1], from the right power tail;
* a per-breakpoint-interval bound in between: on [x_i, x_{i+1}] the
  denominator is at least min(v_i, v_{i+1}) and each numerator term is at
  most the maximum of h over the image interval, which for a piecewise-linear
  h is a maximum over the breakpoints it spans (widened by one breakpoint on
  each side, so no interpolation is needed).

Every enclosure rounds against us: numerator maxima round up at scale 2^64,
denominator minima round down, irrational image endpoints are widened
outward, and the final mu satisfies sup_bound <= 2^(-1/mu) by a pure integer
comparison.  The inequalities are logged to a replayable transcript.

For the erasure operator the minus-image of [x_i, x_{i+1}] is the single
rational interval [2x_i - x_i^2, 2x_{i+1} - x_{i+1}^2] (no root enclosure);
for the general operator the left end is x_i*sqrt(2-x_i^2), enclosed from
below.  The H1 formula is shared: for the erasure operator it is still an
upper bound since the single image point lies inside the general image range.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2

from .candidate import CandidateFunction
from .exactmath import float_log2, rational_le_power, rational_power_bound, sqrt_lower
from .transcript import Transcript

__all__ = [
    "CertificationError",
    "CertifiedBound",
    "bound_H0",
    "bound_H1",
    "bound_middle",
    "certify",
]

_mpz = gmpy2.mpz
_SCALE_BITS = 64
_SCALE = 1 << _SCALE_BITS


class CertificationError(ValueError):
    """A structural guard failed; the candidate cannot be certified as built."""


@dataclass
class CertifiedBound:
    """Outcome of a certification run.

    ``sup_bound`` = max(h0, h1, middle_max) exactly; ``mu`` is the smallest
    rational with denominator <= the search cap satisfying
    sup_bound <= 2^(-1/mu), or None when sup_bound >= 1 (certification
    failed, which is reported rather than raised).
    """

    success: bool
    sup_bound: Fraction
    h0: Fraction
    h1: Fraction
    middle_max: Fraction
    middle_argmax: int
    mu: Fraction | None
    n_breakpoints: int
    transcript_path: str | None
    message: str

    @property
    def mu_float(self) -> float | None:
        return None if self.mu is None else float(self.mu)


def _pow_up(tr: Transcript | None, base: Fraction, exp: Fraction, bits: int) -> Fraction:
    r = rational_power_bound(base, exp, "upper", bits)
    if tr is not None:
        tr.pow_upper(base, exp, r)
    return r


def bound_H0(
    c: CandidateFunction, bits: int = 128, transcript: Transcript | None = None
) -> Fraction:
    """Certified upper bound for the left edge: (1/ns)^eta / 2 + 2^(eta-1)."""
    t_edge = _pow_up(transcript, Fraction(1, c.ns), c.eta, bits)
    t_half = _pow_up(transcript, Fraction(1, 2), 1 - c.eta, bits)
    return t_edge / 2 + t_half


def bound_H1(
    c: CandidateFunction, bits: int = 128, transcript: Transcript | None = None
) -> Fraction:
    """Certified upper bound for the right edge:
    2^(eta-1) + (ns - (ns-1)*sqrt(1 + 2/ns - 1/ns^2))^eta / 2.

    The inner root is enclosed from below, which encloses the bracket (and
    hence the whole expression) from above.
    """
    ns = c.ns
    inner = 1 + Fraction(2, ns) - Fraction(1, ns * ns)
    s = sqrt_lower(inner, bits)
    if transcript is not None:
        transcript.sqrt_lower(inner, s)
    bracket = ns - (ns - 1) * s
    if not 0 < bracket <= 1:
        raise CertificationError(f"H1 bracket enclosure {float(bracket)} outside (0, 1]")
    t_half = _pow_up(transcript, Fraction(1, 2), 1 - c.eta, bits)
    t_bracket = _pow_up(transcript, bracket, c.eta, bits)
    return t_half + t_bracket / 2


def _scale_up(v: Fraction) -> int:
    return -((-v.numerator << _SCALE_BITS) // v.denominator)


def _scale_down(v: Fraction) -> int:
    return (v.numerator << _SCALE_BITS) // v.denominator


class _MaxWindow:
    """Sliding max over int values for queries with nondecreasing bounds."""

    __slots__ = ("values", "dq", "nxt")

    def __init__(self, values: list[int]):
        self.values = values
        self.dq: deque[int] = deque()
        self.nxt = 0

    def query(self, jlo: int, jhi: int) -> int:
        values, dq = self.values, self.dq
        while self.nxt <= jhi:
            v = values[self.nxt]
            while dq and values[dq[-1]] <= v:
                dq.pop()
            dq.append(self.nxt)
            self.nxt += 1
        while dq[0] < jlo:
            dq.popleft()
        return values[dq[0]]


class _RangeState:
    """Pointerized sup-of-h query over [a, b] for a monotone query stream."""

    __slots__ = ("cand", "xs", "window", "lo", "hi", "bits", "tr", "pow_calls")

    def __init__(self, cand: CandidateFunction, vu: list[int], bits: int, tr):
        self.cand = cand
        self.xs = cand.xs
        self.window = _MaxWindow(vu)
        self.lo = 0
        self.hi = 0
        self.bits = bits
        self.tr = tr
        self.pow_calls = 0

    def _b0_up(self, t: Fraction) -> int:
        base = self.cand._tail_base0(t)
        r = rational_power_bound(base, self.cand.eta, "upper", self.bits)
        if self.tr is not None:
            self.tr.pow_upper(base, self.cand.eta, r)
        self.pow_calls += 1
        return _scale_up(self.cand.v0 * r)

    def _b1_up(self, t: Fraction) -> int:
        base = self.cand._tail_base1(t)
        r = rational_power_bound(base, self.cand.eta, "upper", self.bits)
        if self.tr is not None:
            self.tr.pow_upper(base, self.cand.eta, r)
        self.pow_calls += 1
        return _scale_up(self.cand.v1 * r)

    def sup_upper(self, a: Fraction, b: Fraction) -> int:
        """Scaled upper bound on sup of h over [a, b] (0 <= a < b <= 1)."""
        xs = self.xs
        last = len(xs) - 1
        best = 0
        if a < xs[0]:
            best = self._b0_up(b if b < xs[0] else xs[0])
            if b <= xs[0]:
                return best
        if b > xs[last]:
            t = a if a > xs[last] else xs[last]
            v = self._b1_up(t)
            if v > best:
                best = v
            if a >= xs[last]:
                return best
        # piecewise window: last breakpoint <= a through first breakpoint >= b
        lo = self.lo
        while lo < last and xs[lo + 1] <= a:
            lo += 1
        self.lo = lo
        hi = self.hi
        if hi < lo:
            hi = lo
        while hi < last and xs[hi] < b:
            hi += 1
        self.hi = hi
        w = self.window.query(lo, hi)
        return w if w > best else best


def bound_middle(
    c: CandidateFunction,
    operator: str,
    bits: int = 128,
    transcript: Transcript | None = None,
) -> tuple[Fraction, int, list[tuple[int, int]]]:
    """Per-interval certified ratio bounds over [1/ns, 1-1/ns].

    Returns (max ratio as an exact Fraction, argmax interval index, the list
    of scaled (numerator, denominator) pairs for all intervals).
    """
    if operator not in ("bec", "bmsc"):
        raise ValueError(f"operator must be 'bec' or 'bmsc', got {operator!r}")
    xs, vs = c.xs, c.vs
    k = len(xs)
    vu = [_scale_up(v) for v in vs]
    vl = [_scale_down(v) for v in vs]
    if min(vl) <= 0:
        raise CertificationError("a breakpoint value rounded down to zero")
    plus = _RangeState(c, vu, bits, transcript)
    minus = _RangeState(c, vu, bits, transcript)
    pairs: list[tuple[int, int]] = []
    best_num, best_den, best_arg = 1, 1, 0  # ratio 1 placeholder; any real max replaces it
    have_best = False
    b_plus = xs[0] * xs[0]
    b_minus = xs[0] * (2 - xs[0])
    for i in range(k - 1):
        a_plus, b_plus = b_plus, xs[i + 1] * xs[i + 1]
        hp = plus.sup_upper(a_plus, b_plus)
        if operator == "bec":
            a_minus = b_minus
        else:
            u = a_plus * (2 - a_plus)  # x^2 (2 - x^2) at the left breakpoint
            a_minus = sqrt_lower(u, bits)
            if transcript is not None:
                transcript.sqrt_lower(u, a_minus)
        b_minus = xs[i + 1] * (2 - xs[i + 1])
        hm = minus.sup_upper(a_minus, b_minus)
        num = hp + hm
        den = 2 * min(vl[i], vl[i + 1])
        pairs.append((num, den))
        if not have_best or num * best_den > best_num * den:
            best_num, best_den, best_arg = num, den, i
            have_best = True
    return Fraction(best_num, best_den), best_arg, pairs


def _check_guards(
    c: CandidateFunction, bits: int, transcript: Transcript | None
) -> None:
    """Structural guards behind the H0/H1 edge bounds.

    On [1/ns, 2/ns]: breakpoint values nondecreasing, below the left tail,
    and midpoints of adjacent pairs below the tail (the sampled concavity
    check).  Mirrored on [1-2/ns, 1-1/ns] for the right tail.  Failure aborts
    with a diagnostic rather than silently widening anything.
    """
    ns, eta = c.ns, c.eta
    lo_hi = Fraction(2, ns)
    hi_lo = 1 - Fraction(2, ns)

    def tail_guard(indices, value_of_base, vref, increasing: bool, side: str):
        prev = None
        for j in indices:
            x, v = c.xs[j], c.vs[j]
            base = value_of_base(x)
            if not rational_le_power(v / vref, base, eta):
                raise CertificationError(f"{side} tail sample at x={float(x)} exceeds the tail")
            if transcript is not None:
                transcript.pow_lower(base, eta, v / vref)
            if prev is not None:
                xp, vp = prev
                ordered = vp <= v if increasing else v <= vp
                if not ordered:
                    raise CertificationError(
                        f"{side} tail samples not {'increasing' if increasing else 'decreasing'}"
                        f" near x={float(x)}"
                    )
                if transcript is not None:
                    if increasing:
                        transcript.cross(vp, v)
                    else:
                        transcript.cross(v, vp)
                mid_base = value_of_base((xp + x) / 2)
                chord = (vp + v) / 2
                if not rational_le_power(chord / vref, mid_base, eta):
                    raise CertificationError(
                        f"{side} tail concavity check failed near x={float(x)}"
                    )
                if transcript is not None:
                    transcript.pow_lower(mid_base, eta, chord / vref)
            prev = (x, v)

    left = [j for j, x in enumerate(c.xs) if x <= lo_hi]
    tail_guard(left, c._tail_base0, c.v0, True, "left")
    right = [j for j, x in enumerate(c.xs) if x >= hi_lo]
    tail_guard(right, c._tail_base1, c.v1, False, "right")


def _mu_search(sup: Fraction, max_den: int) -> Fraction | None:
    """Smallest p/q with q <= max_den and sup <= 2^(-q/p), integer-verified."""
    if sup >= 1 or sup <= 0:
        return None
    a, b = _mpz(sup.numerator), _mpz(sup.denominator)

    def holds(p: int, q: int) -> bool:
        return (a**p) << q <= b**p

    inv_mu = -float_log2(sup)  # = 1/mu*, the infimum of admissible 1/mu
    best: Fraction | None = None
    for q in range(1, max_den + 1):
        p = max(1, math.floor(q / inv_mu) - 1)
        while not holds(p, q):
            p += 1
            if best is not None and Fraction(p, q) >= best:
                break
        else:
            cand = Fraction(p, q)
            if best is None or cand < best:
                best = cand
    return best


def certify(
    c: CandidateFunction,
    operator: str,
    bits: int = 128,
    mu_max_den: int = 1000,
    transcript_path=None,
    progress: Callable[[str], None] | None = None,
) -> CertifiedBound:
    """Full certification pipeline for a candidate and operator.

    Guards, edge bounds, the middle sweep, the exact maximum, and the integer
    mu search; writes the transcript if a path is given.  A supremum bound
    >= 1 is reported as failure in the result, not raised.
    """

    def note(msg):
        if progress is not None:
            progress(msg)

    c.validate()
    tr = Transcript(
        meta={
            "operator": operator,
            "ns": c.ns,
            "eta": f"{c.eta.numerator}/{c.eta.denominator}",
            "m_bar": c.m_bar,
            "delta_s": f"{c.delta_s.numerator}/{c.delta_s.denominator}",
            "breakpoints": len(c.xs),
            "precision_bits": bits,
        }
    )
    note("checking edge guards")
    _check_guards(c, bits, tr)
    note("computing edge bounds")
    h0 = bound_H0(c, bits, tr)
    h1 = bound_H1(c, bits, tr)
    note(f"sweeping {len(c.xs) - 1} middle intervals")
    middle_max, argmax, pairs = bound_middle(c, operator, bits, tr)
    sup = max(h0, h1, middle_max)
    tr.cross(h0, sup)
    tr.cross(h1, sup)
    sn, sd = sup.numerator, sup.denominator
    for num, den in pairs:
        if _mpz(num) * sd > _mpz(sn) * den:  # cannot happen; guards the transcript
            raise CertificationError("middle interval exceeds the recorded supremum")
        tr.lines.append(f"ASSERT {num}/{den} <= {sn}/{sd} VIA CROSS {num} {den} {sn} {sd}")
    if sup >= 1:
        message = "certification failed: supremum bound >= 1, no valid mu"
        if transcript_path is not None:
            tr.write(transcript_path)
        return CertifiedBound(
            success=False,
            sup_bound=sup,
            h0=h0,
            h1=h1,
            middle_max=middle_max,
            middle_argmax=argmax,
            mu=None,
            n_breakpoints=len(c.xs),
            transcript_path=None if transcript_path is None else str(transcript_path),
            message=message,
        )
    note("searching for the certified exponent")
    mu = _mu_search(sup, mu_max_den)
    if mu is not None:
        tr.mu_bound(sup, mu)
    if transcript_path is not None:
        note("writing transcript")
        tr.write(transcript_path)
    message = f"certified sup ratio <= {float(sup):.6f}, mu <= {float(mu):.4f}" if mu else (
        "no admissible mu at the denominator cap"
    )
    return CertifiedBound(
        success=mu is not None,
        sup_bound=sup,
        h0=h0,
        h1=h1,
        middle_max=middle_max,
        middle_argmax=argmax,
        mu=mu,
        n_breakpoints=len(c.xs),
        transcript_path=None if transcript_path is None else str(transcript_path),
        message=message,
    )
