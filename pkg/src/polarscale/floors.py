"""Error-floor analysis: synthetic-parameter domination between channels and
fixed-code channel sweeps.

The central inequality compares the polarization of two channels: with
eta = log2 Z(W) / log2 Z(W'),

    Z_n^(i)(W) <= Z_n^(i)(W') ^ eta        for every index i,

valid for BECs whenever Z(W) <= Z(W'), and for general BMSCs (via interval
propagation here) whenever Z(W) <= Z(W')^2 (eta >= 2).  Since eta is
irrational in general, every comparison is verified in log form

    |log2 Z|  * |log2 z'|  >=  |log2 z| * |log2 Z'|

with certified rational log enclosures rounded against the claim, so a pass
implies the true inequality.  The plus-heavy boundary index (all squarings)
satisfies the relation with exact equality and is dispatched structurally;
everything else passes with certified margin.

Summing over a fixed information set gives the union-bound comparison and,
sweeping the channel under a fixed code, the absence of an error-floor
region: the log-log slope of the union bound never drops below 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .channel import PolarCode, iter_synthetic_bec, union_bound_pe
from .exactmath import (
    float_log2,
    log2_interval,
    log2_pair_interval,
    rational_power_bound,
    round_down_sig,
    round_up_sig,
    sqrt_lower,
)

__all__ = [
    "FloorExponent",
    "floor_exponent",
    "verify_domination_bec",
    "verify_corollary_bec",
    "verify_domination_bmsc_intervals",
    "check_threshold_inequality",
    "proof_inequalities_check",
    "SweepReport",
    "floor_sweep",
]

_LOG_BITS = 72
_SIG = 96


def _abs_log_bounds(num: int, den: int, bits: int = _LOG_BITS) -> tuple[Fraction, Fraction]:
    """Certified (lo, hi) on |log2(num/den)| for 0 < num/den < 1, sig-rounded."""
    lo, hi = log2_pair_interval(num, den, bits)
    return round_down_sig(-hi, _SIG), round_up_sig(-lo, _SIG)


@dataclass(frozen=True)
class FloorExponent:
    """The domination exponent eta = log2 Z(W) / log2 Z(W') with certified
    rational bounds; eta >= 1 whenever Z <= Z' < 1, and the general-channel
    claim additionally needs eta >= 2 (equivalently Z <= Z'^2)."""

    z: Fraction
    z_prime: Fraction
    eta_lo: Fraction
    eta_hi: Fraction

    @property
    def eta_float(self) -> float:
        return float((self.eta_lo + self.eta_hi) / 2)

    @property
    def general_case_ok(self) -> bool:
        return self.z <= self.z_prime * self.z_prime


def floor_exponent(z, z_prime) -> FloorExponent:
    """Certified enclosure of log2(z)/log2(z') for 0 < z <= z' < 1."""
    z, z_prime = Fraction(z), Fraction(z_prime)
    if not 0 < z <= z_prime < 1:
        raise ValueError("need 0 < z <= z' < 1")
    z_lo = round_down_sig(-log2_interval(z)[1], _SIG)
    z_hi = round_up_sig(-log2_interval(z)[0], _SIG)
    zp_lo = round_down_sig(-log2_interval(z_prime)[1], _SIG)
    zp_hi = round_up_sig(-log2_interval(z_prime)[0], _SIG)
    return FloorExponent(z=z, z_prime=z_prime, eta_lo=z_lo / zp_hi, eta_hi=z_hi / zp_lo)


class _ProfileLogCache:
    """Per-channel cache of certified |log2 Z| bounds for every depth/index."""

    def __init__(self, bits: int = _LOG_BITS):
        self.bits = bits
        self._store: dict[tuple[Fraction, int], list[tuple[Fraction, Fraction]]] = {}

    def bounds(self, z: Fraction, n: int) -> list[tuple[Fraction, Fraction]]:
        key = (z, n)
        if key not in self._store:
            self._store[key] = [
                _abs_log_bounds(p, q, self.bits) for _, p, q in iter_synthetic_bec(z, n)
            ]
        return self._store[key]


def _dominates(
    lz_lo: Fraction, lzp_hi: Fraction, base_hi: Fraction, basep_lo: Fraction
) -> bool:
    """Certified |log Z| * |log z'| >= |log z| * |log Z'| from directed bounds."""
    return lz_lo * basep_lo >= base_hi * lzp_hi


def verify_domination_bec(z, z_prime, n_max: int, cache: _ProfileLogCache | None = None) -> dict:
    """Exhaustive certified check of the domination inequality for BEC pairs.

    Checks every index at every depth 1..n_max.  Returns counters plus the
    list of violations (empty in a correct implementation: the inequality is
    a theorem for z <= z').
    """
    z, z_prime = Fraction(z), Fraction(z_prime)
    if not 0 < z <= z_prime < 1:
        raise ValueError("need 0 < z <= z' < 1")
    if cache is None:
        cache = _ProfileLogCache()
    checked = equalities = 0
    violations: list[tuple[int, int]] = []
    undecided: list[tuple[int, int]] = []
    if z == z_prime:
        # identical processes: exact equality for every index
        for n in range(1, n_max + 1):
            checked += 1 << n
            equalities += 1 << n
        return {
            "z": z, "z_prime": z_prime, "n_max": n_max, "checked": checked,
            "equalities": equalities, "violations": violations, "undecided": undecided,
        }
    base_hi = round_up_sig(-log2_interval(z)[0], _SIG)
    basep_lo = round_down_sig(-log2_interval(z_prime)[1], _SIG)
    fine: _ProfileLogCache | None = None
    for n in range(1, n_max + 1):
        top = 1 << n
        bw = cache.bounds(z, n)
        bwp = cache.bounds(z_prime, n)
        for idx in range(1, top + 1):
            checked += 1
            if idx == top:
                # all-plus path: Z = z^(2^n), Z' = z'^(2^n); the claim holds
                # with exact equality by the definition of eta
                equalities += 1
                continue
            lz_lo, _ = bw[idx - 1]
            _, lzp_hi = bwp[idx - 1]
            if _dominates(lz_lo, lzp_hi, base_hi, basep_lo):
                continue
            # retry at quadrupled precision before flagging
            if fine is None:
                fine = _ProfileLogCache(bits=4 * _LOG_BITS)
            bh2 = round_up_sig(-log2_interval(z, fine.bits)[0], _SIG)
            bl2 = round_down_sig(-log2_interval(z_prime, fine.bits)[1], _SIG)
            lz_lo2, lz_hi2 = fine.bounds(z, n)[idx - 1]
            lzp_lo2, lzp_hi2 = fine.bounds(z_prime, n)[idx - 1]
            if _dominates(lz_lo2, lzp_hi2, bh2, bl2):
                continue
            if lz_hi2 * bl2 < bh2 * lzp_lo2:
                violations.append((n, idx))
            else:
                undecided.append((n, idx))
    return {
        "z": z, "z_prime": z_prime, "n_max": n_max, "checked": checked,
        "equalities": equalities, "violations": violations, "undecided": undecided,
    }


def verify_corollary_bec(code: PolarCode, z, z_prime=None) -> dict:
    """Union-bound domination for a fixed information set:
    sum_I Z(z) <= (sum_I Z(z'))^eta, verified with signed log enclosures
    (the sums may exceed 1, so signs matter).
    """
    z = Fraction(z)
    z_prime = code.design_param if z_prime is None else Fraction(z_prime)
    if not 0 < z <= z_prime < 1:
        raise ValueError("need 0 < z <= z' < 1")
    pe_z = union_bound_pe(code, z)
    pe_zp = union_bound_pe(code, z_prime)
    if not code.info_set:
        return {"pe_z": pe_z, "pe_zp": pe_zp, "holds": True, "equality": True, "margin_log2": 0.0}
    if z == z_prime:
        return {
            "pe_z": pe_z, "pe_zp": pe_zp, "holds": pe_z == pe_zp,
            "equality": True, "margin_log2": 0.0,
        }
    # claim in log form: log P(z) * |log z'| <= |log z| * log P(z')
    lp = log2_interval(pe_z)
    lp_hi = round_up_sig(lp[1], _SIG)
    lpp = log2_interval(pe_zp)
    lpp_lo = round_down_sig(lpp[0], _SIG)
    base_lo = round_down_sig(-log2_interval(z)[1], _SIG)
    base_hi = round_up_sig(-log2_interval(z)[0], _SIG)
    basep_lo = round_down_sig(-log2_interval(z_prime)[1], _SIG)
    basep_hi = round_up_sig(-log2_interval(z_prime)[0], _SIG)
    lhs_hi = lp_hi * (basep_hi if lp_hi >= 0 else basep_lo)
    rhs_lo = (base_lo * lpp_lo) if lpp_lo >= 0 else (base_hi * lpp_lo)
    holds = lhs_hi <= rhs_lo
    return {
        "pe_z": pe_z,
        "pe_zp": pe_zp,
        "holds": bool(holds),
        "equality": False,
        "margin_log2": float(rhs_lo - lhs_hi),
    }


def verify_domination_bmsc_intervals(
    z_interval, zp_interval, n_max: int, bits: int = 128, sig_bits: int = 192
) -> dict:
    """Interval-propagated domination check for general BMSC pairs.

    Both channels are tracked as Bhattacharyya intervals through every index
    path (worst case: W follows its upper endpoints, W' its lower ones) and
    the fixed-exponent form of the claim, Z_n(W) <= Z_n(W')^2, is verified on
    those conservative endpoints by pure rational comparison.  Since every
    consistent pair has exponent eta >= 2 (that is the precondition
    hi(Z0) <= lo(Z0')^2) and bases are below 1, a pass certifies the
    conclusion for every BMSC pair consistent with the input intervals.

    Endpoints are truncated outward to ``sig_bits`` significant bits per
    level; inputs exactly on the eta = 2 boundary have zero margin and may
    then report spurious violations.
    """
    z_lo, z_hi = (Fraction(v) for v in z_interval)
    zp_lo, zp_hi = (Fraction(v) for v in zp_interval)
    if not (0 < z_lo <= z_hi < 1 and 0 < zp_lo <= zp_hi < 1):
        raise ValueError("intervals must lie strictly inside (0, 1)")
    if not z_hi <= zp_lo * zp_lo:
        raise ValueError("precondition hi(Z) <= lo(Z')^2 fails (open-case territory)")
    if n_max > 12:
        raise ValueError("interval verification capped at depth 12")
    degenerate = z_lo == z_hi and zp_lo == zp_hi

    def down(v: Fraction) -> Fraction:
        # complement-side rounding above 1/2 keeps 1-v resolvable at any depth
        if 2 * v > 1:
            return 1 - round_up_sig(1 - v, sig_bits)
        return round_down_sig(v, sig_bits)

    def up(v: Fraction) -> Fraction:
        if 2 * v > 1:
            return 1 - round_down_sig(1 - v, sig_bits)
        return round_up_sig(v, sig_bits)

    def children(iv: tuple[Fraction, Fraction]):
        lo, hi = iv
        lo2 = lo * lo
        if 1 - lo2 <= Fraction(1, 1 << 32):
            # lo*sqrt(2-lo^2) = sqrt(1-t) with t = (1-lo^2)^2; the rational
            # bound sqrt(1-t) >= 1 - t/2 - t^2/2 stays sharp arbitrarily near
            # 1, where a fixed-precision dyadic root would swamp the complement
            t = (1 - lo2) ** 2
            root_lo = 1 - t / 2 - t * t / 2
        else:
            u = lo2 * (2 - lo2)
            # keep the enclosure relative: deep plus-paths drive u doubly
            # exponentially to 0, where fixed absolute precision floors to 0
            extra = max(0, (u.denominator.bit_length() - u.numerator.bit_length()) // 2 + 1)
            root_lo = sqrt_lower(u, bits + extra)
        minus = (down(root_lo), up(2 * hi - hi * hi))
        plus = (down(lo2), up(hi * hi))
        return minus, plus

    level_w = [(z_lo, z_hi)]
    level_wp = [(zp_lo, zp_hi)]
    checked = 0
    violations: list[tuple[int, int]] = []
    for n in range(1, n_max + 1):
        nw, nwp = [], []
        for iv in level_w:
            m, p = children(iv)
            nw.extend((m, p))
        for iv in level_wp:
            m, p = children(iv)
            nwp.extend((m, p))
        level_w, level_wp = nw, nwp
        for idx in range(1, (1 << n) + 1):
            checked += 1
            hi_n = level_w[idx - 1][1]
            lo_n = level_wp[idx - 1][0]
            if hi_n > lo_n * lo_n:
                violations.append((n, idx))
    return {
        "checked": checked,
        "violations": violations,
        "degenerate": degenerate,
    }


# --- scalar proof inequalities ------------------------------------------------


def check_threshold_inequality(family: str, eta, grid: int = 10_000, bits: int = 96) -> dict:
    """Grid check of the minus-branch power inequalities.

    family "square":  2 - x^eta <= (2 - x^2)^(eta/2)   (holds iff eta >= 2)
    family "linear":  2 - x^eta <= (2 - x)^eta         (holds iff eta >= 1)

    Each grid point is decided by certified directed power bounds (exact
    rational comparison when eta makes both sides rational); violations are
    collected, so the iff direction is testable from both sides.
    """
    if family not in ("square", "linear"):
        raise ValueError("family must be 'square' or 'linear'")
    eta = Fraction(eta)
    if eta <= 0:
        raise ValueError("eta must be positive")
    rhs_exp = eta / 2 if family == "square" else eta
    violations: list[Fraction] = []
    undecided: list[Fraction] = []
    for k in range(grid + 1):
        x = Fraction(k, grid)
        rhs_base = 2 - x * x if family == "square" else 2 - x
        if eta.denominator == 1 and rhs_exp.denominator == 1:
            lhs = 2 - x**eta.numerator
            rhs = rhs_base**rhs_exp.numerator
            if lhs > rhs:
                violations.append(x)
            continue
        lhs_up = 2 - rational_power_bound(x, eta, "lower", bits)
        rhs_lo = rational_power_bound(rhs_base, rhs_exp, "lower", bits)
        if lhs_up <= rhs_lo:
            continue
        lhs_lo = 2 - rational_power_bound(x, eta, "upper", bits)
        rhs_up = rational_power_bound(rhs_base, rhs_exp, "upper", bits)
        if lhs_lo > rhs_up:
            violations.append(x)
        else:
            undecided.append(x)
    return {
        "family": family,
        "eta": eta,
        "grid": grid,
        "violations": violations,
        "undecided": undecided,
        "holds_everywhere": not violations and not undecided,
    }


def proof_inequalities_check(grid: int = 2000) -> dict:
    """The proof's scalar inequalities: hold at/above threshold, fail below.

    Verifies the square family for eta in {2, 2.5, 3} and the linear family
    for eta in {1, 1.5, 2}; then confirms violations exist for eta = 1.9 and
    eta = 0.9 respectively.
    """
    results = {}
    for eta in (Fraction(2), Fraction(5, 2), Fraction(3)):
        results[("square", str(eta))] = check_threshold_inequality("square", eta, grid)
    for eta in (Fraction(1), Fraction(3, 2), Fraction(2)):
        results[("linear", str(eta))] = check_threshold_inequality("linear", eta, grid)
    below_sq = check_threshold_inequality("square", Fraction(19, 10), grid)
    below_lin = check_threshold_inequality("linear", Fraction(9, 10), grid)
    ok = all(r["holds_everywhere"] for r in results.values())
    return {
        "at_or_above_ok": ok,
        "below_square_violations": len(below_sq["violations"]),
        "below_linear_violations": len(below_lin["violations"]),
        "details": results,
    }


# --- fixed-code channel sweep ---------------------------------------------------


@dataclass
class SweepReport:
    code: PolarCode
    z_grid: list[Fraction]
    pe_tilde: list[Fraction]
    slopes: list[float]  # per adjacent pair, d log2 pe / d log2 z
    min_slope: float
    reference_exponent: float  # log2 pe(z') / log2 z'

    def rows(self):
        out = []
        for i, (z, pe) in enumerate(zip(self.z_grid, self.pe_tilde)):
            slope = self.slopes[i - 1] if i else float("nan")
            out.append((z, pe, slope))
        return out


def floor_sweep(code: PolarCode, z_grid) -> SweepReport:
    """Exact union bound of a fixed code across a channel grid, with log-log
    slopes per adjacent pair.

    The reference exponent log2 pe(z')/log2 z' is the floor-free comparison
    value: the domination corollary forces every chord slope at or above it.
    """
    zs = sorted(Fraction(z) for z in z_grid)
    if not zs:
        raise ValueError("empty channel grid")
    if any(not 0 < z <= code.design_param for z in zs):
        raise ValueError("grid values must lie in (0, design parameter]")
    if not code.info_set:
        raise ValueError("empty information set")
    pes = [union_bound_pe(code, z) for z in zs]
    logs_z = [float_log2(z) for z in zs]
    logs_pe = [float_log2(pe) for pe in pes]
    slopes = [
        (logs_pe[i + 1] - logs_pe[i]) / (logs_z[i + 1] - logs_z[i])
        for i in range(len(zs) - 1)
    ]
    pe_design = union_bound_pe(code)
    reference = float_log2(pe_design) / float_log2(code.design_param)
    return SweepReport(
        code=code,
        z_grid=zs,
        pe_tilde=pes,
        slopes=slopes,
        min_slope=min(slopes) if slopes else float("nan"),
        reference_exponent=reference,
    )
