"""Certified integer-backed primitives for directed-rounding arithmetic.

Everything in this module reduces to exact big-integer comparisons, so the
bounds it returns are immune to floating-point error.  The primitives are:

* dyadic enclosures of square roots of rationals (``sqrt_lower`` / ``sqrt_upper``),
* dyadic enclosures of rational powers of rationals (``rational_power_bound``),
* exact verification of ``r <= base**(p/q)`` style claims (``rational_le_power``),
* certified enclosures of log2 of a positive rational (``log2_interval``),
* polynomial nonnegativity on an interval via Bernstein coefficients.

Enclosures always round *against* the caller: a "lower" result is <= the true
value and an "upper" result is >= it.  The dyadic denominators are powers of
two so that every inequality can be replayed with integers only.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import gmpy2

__all__ = [
    "sqrt_lower",
    "sqrt_upper",
    "rational_power_bound",
    "rational_le_power",
    "rational_ge_power",
    "log2_interval",
    "log2_pair_interval",
    "log2_abs_lower",
    "log2_abs_upper",
    "ln2_enclosure",
    "bernstein_nonneg",
    "float_log2",
    "float_log2_pair",
    "round_down_sig",
    "round_up_sig",
]

_mpz = gmpy2.mpz


def _isqrt(n: int) -> int:
    return int(gmpy2.isqrt(_mpz(n)))


def _iroot_floor(n: int, k: int) -> int:
    root, _exact = gmpy2.iroot(_mpz(n), k)
    return int(root)


def sqrt_lower(value: Fraction, bits: int = 128) -> Fraction:
    """Largest dyadic m/2^bits with (m/2^bits)^2 <= value.

    ``value`` must be a nonnegative rational.  The result is certified by the
    integer inequality m^2 * den <= num * 4^bits.
    """
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    m = _isqrt((num << (2 * bits)) // den)
    return Fraction(m, 1 << bits)


def sqrt_upper(value: Fraction, bits: int = 128) -> Fraction:
    """Smallest convenient dyadic upper bound on sqrt(value).

    Returns the exact root when value is a perfect square of a dyadic at the
    working precision; otherwise rounds one unit up.
    """
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    scaled = num << (2 * bits)
    m = _isqrt(scaled // den)
    if m * m * den == scaled:
        return Fraction(m, 1 << bits)
    return Fraction(m + 1, 1 << bits)


def rational_power_bound(
    base: Fraction,
    exponent: Fraction,
    direction: str,
    bits: int = 128,
) -> Fraction:
    """Dyadic enclosure of ``base ** exponent`` with directed rounding.

    Parameters
    ----------
    base : Fraction
        Nonnegative rational.
    exponent : Fraction
        Rational p/q.  Negative exponents invert the base (which must then be
        nonzero).
    direction : {"upper", "lower"}
        "upper" returns r >= base**exponent, "lower" returns r <= it.
    bits : int
        Dyadic precision of the returned bound.

    The result is certified by the cross-multiplied integer test
    r^q * base_den^p  vs  base_num^p * r_den^q; perfect powers are returned
    exactly (e.g. (1/4)**(1/2) -> 1/2).
    """
    if direction not in ("upper", "lower"):
        raise ValueError(f"direction must be 'upper' or 'lower', got {direction!r}")
    if base < 0:
        raise ValueError("negative base")
    p, q = exponent.numerator, exponent.denominator
    if p == 0:
        return Fraction(1)
    if base == 0:
        if p < 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return Fraction(0)
    if p < 0:
        base = 1 / base
        p = -p
    if base == 1:
        return Fraction(1)
    g = gcd(p, q)
    p //= g
    q //= g
    bn, bd = base.numerator, base.denominator
    if q == 1:
        return Fraction(bn**p, bd**p)
    num_pow = _mpz(bn) ** p << (bits * q)
    den_pow = _mpz(bd) ** p
    scaled, rem = divmod(num_pow, den_pow)
    root, root_exact = gmpy2.iroot(scaled, q)
    m = int(root)
    if direction == "lower":
        return Fraction(m, 1 << bits)
    # exact only if no precision was lost in the division nor in the root
    if root_exact and rem == 0:
        return Fraction(m, 1 << bits)
    return Fraction(m + 1, 1 << bits)


def rational_le_power(value: Fraction, base: Fraction, exponent: Fraction) -> bool:
    """Exact test of ``value <= base ** exponent`` by integer cross-powers.

    Only sensible for moderate exponent denominators; the comparison is
    vn^q * bn_den^p <= bn^p * vd^q (for positive p/q), evaluated exactly.
    """
    p, q = exponent.numerator, exponent.denominator
    if base < 0 or value < 0:
        raise ValueError("nonnegative rationals required")
    if p == 0:
        return value <= 1
    if p < 0:
        if base == 0:
            raise ZeroDivisionError("0 raised to a negative power")
        base = 1 / base
        p = -p
    if base == 0:
        return value == 0
    vn, vd = value.numerator, value.denominator
    bn, bd = base.numerator, base.denominator
    return (_mpz(vn) ** q) * (_mpz(bd) ** p) <= (_mpz(bn) ** p) * (_mpz(vd) ** q)


def rational_ge_power(value: Fraction, base: Fraction, exponent: Fraction) -> bool:
    """Exact test of ``value >= base ** exponent``; see rational_le_power."""
    p, q = exponent.numerator, exponent.denominator
    if base < 0 or value < 0:
        raise ValueError("nonnegative rationals required")
    if p == 0:
        return value >= 1
    if p < 0:
        if base == 0:
            raise ZeroDivisionError("0 raised to a negative power")
        base = 1 / base
        p = -p
    if base == 0:
        return True
    vn, vd = value.numerator, value.denominator
    bn, bd = base.numerator, base.denominator
    return (_mpz(vn) ** q) * (_mpz(bd) ** p) >= (_mpz(bn) ** p) * (_mpz(vd) ** q)


# --- certified log2 ---------------------------------------------------------

_LN2_CACHE: dict[int, tuple[Fraction, Fraction]] = {}


def ln2_enclosure(bits: int = 192) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ln 2 via 2*atanh(1/3) = 2 * sum (1/3)^(2k+1)/(2k+1).

    The series has positive terms, so the partial sum is a lower bound and the
    geometric tail bound gives the upper bound.
    """
    if bits in _LN2_CACHE:
        return _LN2_CACHE[bits]
    terms = bits // 3 + 4  # 9^-k decay: ~3.17 bits per term
    s = Fraction(0)
    x = Fraction(1, 3)
    x2 = x * x
    power = x
    for k in range(terms):
        s += power / (2 * k + 1)
        power *= x2
    lo = 2 * s
    # tail: 2 * sum_{k>=terms} x^(2k+1)/(2k+1) <= 2 * power/(2*terms+1) / (1 - 1/9)
    tail = 2 * power / ((2 * terms + 1) * Fraction(8, 9))
    hi = lo + tail
    _LN2_CACHE[bits] = (lo, hi)
    return lo, hi


def _log2_mantissa_bounds(num: int, den: int, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds on log2(num/den) for num/den in [1, 2), by squaring digit extraction."""
    work = 2 * bits + 16
    one = 1 << work
    # outward-rounded mantissa at the working precision
    ylo = (num << work) // den
    yhi = -((-(num << work)) // den)
    acc_lo = Fraction(0)
    step = Fraction(1, 2)
    for _ in range(bits):
        ylo = (ylo * ylo) >> work
        yhi = ((yhi * yhi) + one - 1) >> work
        if yhi < 2 * one:
            pass  # digit 0
        elif ylo >= 2 * one:
            acc_lo += step
            ylo >>= 1
            yhi = (yhi + 1) >> 1
        else:
            # enclosure straddles 2: cannot decide this digit, stop early
            return acc_lo, acc_lo + 2 * step
        step /= 2
    return acc_lo, acc_lo + 2 * step


def _dyadic_pair_bounds(num: int, den: int, bits: int) -> tuple[Fraction, Fraction]:
    """Outward dyadic enclosure of num/den with a ``bits``-bit mantissa.

    Works directly on the int pair (one floor division, no gcd passes), so it
    stays cheap when the operands are many kilobits wide.
    """
    shift = bits - (num.bit_length() - den.bit_length())
    if shift < 0:
        den <<= -shift
        shift = 0
    lo, rem = divmod(num << shift, den)
    return Fraction(lo, 1 << shift), Fraction(lo if rem == 0 else lo + 1, 1 << shift)


def _log2_near_one_bounds(e_num: int, e_den: int, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds on |log2(1-e)| for e = e_num/e_den in (0, 1/2], with good
    *relative* precision at any magnitude of e.

    Uses |ln(1-e)| = e * sum e^(k-1)/k on an outward dyadic rounding of e:
    for tiny e three terms already pin the bracket to relative width e^2;
    otherwise the series is summed in fixed point with directed rounding.
    """
    ln2_lo, ln2_hi = ln2_enclosure()
    eps_lo, eps_hi = _dyadic_pair_bounds(e_num, e_den, bits + 8)
    if eps_hi <= Fraction(1, 1 << (bits + 16)):
        # corrections sum to <= 2 eps^2 <= 2^-(bits+15) eps: one-ulp widening
        widen = Fraction((1 << (bits + 16)) + 2, 1 << (bits + 16))
        return eps_lo / ln2_hi, eps_hi * widen / ln2_lo
    if eps_hi <= Fraction(1, 1 << (bits // 2)):
        # 1 + e/2 <= sum e^(k-1)/k <= 1 + e/2 + e^2  (tail <= e^2/(3(1-e)) <= e^2)
        abs_ln_lo = eps_lo * (1 + eps_lo / 2)
        abs_ln_hi = eps_hi * (1 + eps_hi / 2 + eps_hi * eps_hi)
        return abs_ln_lo / ln2_hi, abs_ln_hi / ln2_lo
    work = bits + 16
    scale = 1 << work
    e_lo = (eps_lo.numerator << work) // eps_lo.denominator
    e_hi = -((-(eps_hi.numerator << work)) // eps_hi.denominator)
    s_lo, s_hi = 0, 0
    p_lo, p_hi = e_lo, e_hi
    k = 1
    while k <= work:
        s_lo += p_lo // k
        s_hi += -((-p_hi) // k)
        p_lo = (p_lo * e_lo) >> work
        p_hi = ((p_hi * e_hi) + scale - 1) >> work
        k += 1
    # tail of sum e^j/j from j=k, bounded by p_hi/(k*(1-e)) with e <= 1/2
    tail = -((-2 * p_hi) // k)
    abs_ln_lo = Fraction(s_lo, scale)
    abs_ln_hi = Fraction(s_hi + tail + 1, scale)
    return abs_ln_lo / ln2_hi, abs_ln_hi / ln2_lo


def _log2_pair_interval(num: int, den: int, bits: int) -> tuple[Fraction, Fraction]:
    if num == den:
        return Fraction(0), Fraction(0)
    if num > den:
        lo, hi = _log2_pair_interval(den, num, bits)
        return -hi, -lo
    if 2 * num > den:
        alo, ahi = _log2_near_one_bounds(den - num, den, bits)
        return -ahi, -alo
    # shift so that the mantissa num*2^k/den lies in [1, 2)
    k = den.bit_length() - num.bit_length()
    if (num << k) < den:
        k += 1
    mlo, mhi = _log2_mantissa_bounds(num << k, den, bits)
    return mlo - k, mhi - k


def log2_pair_interval(num: int, den: int, bits: int = 72) -> tuple[Fraction, Fraction]:
    """log2_interval on a raw positive int pair (no Fraction normalization)."""
    if num <= 0 or den <= 0:
        raise ValueError("log2 of a nonpositive rational")
    return _log2_pair_interval(num, den, bits)


def log2_interval(value: Fraction, bits: int = 72) -> tuple[Fraction, Fraction]:
    """Certified enclosure (lo, hi) of log2(value) for a positive rational.

    Handles the full positive range, including values extremely close to 1
    (where a series in 1-value keeps the relative error small) and values
    whose numerator/denominator are thousands of bits wide; the cost is a
    couple of big integer divisions plus small-integer work.
    """
    if value <= 0:
        raise ValueError("log2 of a nonpositive rational")
    return _log2_pair_interval(value.numerator, value.denominator, bits)


def log2_abs_lower(value: Fraction, bits: int = 72) -> Fraction:
    """Certified lower bound on |log2(value)| for value in (0, 1)."""
    lo, hi = log2_interval(value, bits)
    if hi > 0:
        raise ValueError("value must lie in (0, 1)")
    return -hi


def log2_abs_upper(value: Fraction, bits: int = 72) -> Fraction:
    """Certified upper bound on |log2(value)| for value in (0, 1)."""
    lo, hi = log2_interval(value, bits)
    if hi > 0:
        raise ValueError("value must lie in (0, 1)")
    return -lo


def float_log2_pair(num: int, den: int) -> float:
    """Fast float estimate of log2(num/den) for positive ints of any size.

    Not certified; used for search heuristics and reports.  Accurate to a few
    ulps even when the integers have millions of bits.
    """
    import math

    if num <= 0 or den <= 0:
        raise ValueError("log2 of a nonpositive rational")
    nb = num.bit_length() - 64
    db = den.bit_length() - 64
    if nb > 0:
        num >>= nb
    else:
        nb = 0
    if db > 0:
        den >>= db
    else:
        db = 0
    return math.log2(num) - math.log2(den) + (nb - db)


def float_log2(value: Fraction) -> float:
    """float_log2_pair on a Fraction."""
    return float_log2_pair(value.numerator, value.denominator)


def round_down_sig(value: Fraction, bits: int = 96) -> Fraction:
    """Largest dyadic with a ``bits``-bit mantissa that is <= value.

    Relative truncation: preserves positivity and magnitude of arbitrarily
    tiny values (unlike rounding at a fixed absolute scale).
    """
    if value == 0:
        return Fraction(0)
    if value < 0:
        return -round_up_sig(-value, bits)
    num, den = value.numerator, value.denominator
    shift = bits - (num.bit_length() - den.bit_length())
    if shift <= 0:
        adj = -shift
        return Fraction((num // (den << adj)) << adj, 1)
    return Fraction((num << shift) // den, 1 << shift)


def round_up_sig(value: Fraction, bits: int = 96) -> Fraction:
    """Smallest dyadic with a ``bits``-bit mantissa that is >= value."""
    if value == 0:
        return Fraction(0)
    if value < 0:
        return -round_down_sig(-value, bits)
    num, den = value.numerator, value.denominator
    shift = bits - (num.bit_length() - den.bit_length())
    if shift <= 0:
        adj = -shift
        return Fraction(-((-num) // (den << adj)) << adj, 1)
    return Fraction(-((-(num << shift)) // den), 1 << shift)


# --- polynomial positivity --------------------------------------------------


def _binom_row(n: int) -> list[int]:
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return row


def bernstein_nonneg(
    coeffs: list[Fraction], depth: int = 10
) -> tuple[bool, Fraction | None]:
    """Certified nonnegativity of a polynomial on [0, 1].

    ``coeffs`` are power-basis coefficients, constant term first.  Returns
    ``(True, None)`` when all Bernstein coefficients are nonnegative on every
    leaf of a binary subdivision of depth <= ``depth`` (a proof of p >= 0), or
    ``(False, x)`` with a rational witness x where p(x) < 0, or
    ``(False, None)`` when undecided at the depth limit.
    """

    def poly_eval(c: list[Fraction], x: Fraction) -> Fraction:
        acc = Fraction(0)
        for ck in reversed(c):
            acc = acc * x + ck
        return acc

    def bern_coeffs(c: list[Fraction]) -> list[Fraction]:
        n = len(c) - 1
        cn = _binom_row(n)
        out = []
        for j in range(n + 1):
            cj = _binom_row(j)
            out.append(sum(Fraction(cj[k], cn[k]) * c[k] for k in range(j + 1)))
        return out

    def shift_scale(c: list[Fraction], a: Fraction, h: Fraction) -> list[Fraction]:
        # coefficients of p(a + h*t) in t
        n = len(c) - 1
        out = [Fraction(0)] * (n + 1)
        for k, ck in enumerate(c):
            # expand ck * (a + h t)^k
            row = _binom_row(k)
            for j in range(k + 1):
                out[j] += ck * row[j] * a ** (k - j) * h**j
        return out

    def recurse(a: Fraction, b: Fraction, d: int) -> tuple[bool, Fraction | None]:
        local = shift_scale(coeffs, a, b - a)
        bc = bern_coeffs(local)
        if all(v >= 0 for v in bc):
            return True, None
        # negative value at an endpoint or midpoint is a definite witness
        for x in (a, (a + b) / 2, b):
            if poly_eval(coeffs, x) < 0:
                return False, x
        if d <= 0:
            return False, None
        mid = (a + b) / 2
        ok1, w1 = recurse(a, mid, d - 1)
        if not ok1:
            return ok1, w1
        return recurse(mid, b, d - 1)

    return recurse(Fraction(0), Fraction(1), depth)
