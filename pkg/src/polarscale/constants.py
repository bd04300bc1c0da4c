"""The explicit constant chain linking a certified supremum ratio to a
blocklength bound, plus desk-scale checkers for the supporting lemmas.

Given mu and a ratio bound 2^(-rho1) (the certified supremum), the chain is

    alpha = log2(1 + (2^(-1/mu) - 2^(-rho1)) / (2^(-1/mu) + 2^(-rho1)))
    eps1, eps2:  the two crossings of t(x) = 2^(-rho1), where
                 t(x) = ((x(1+x))^alpha + ((2-x)(1-x)^(1/3))^alpha) / 2
    c3    = sup over (eps1, 1-eps2) of (x(1-x))^alpha / h(x)
    delta = (2^(-1/mu) - 2^(-rho1)) / (2*sqrt(2)*c3 + 2^(-1/mu) - 2^(-rho1))
    rho   = -log2(2^(-rho1) + sqrt(2) * delta/(1-delta) * c3)
    c2    = sqrt(2 pe) + 2 (1/delta) pe^(-alpha),     beta1 = c2^mu

with the algebraic identity rho - alpha = 1/mu.  For tight certified chains
alpha is tiny, eps1 is astronomically small and c3 (hence 1/delta, c2, beta1)
astronomically large; everything is therefore evaluated in mpmath at a
configurable working precision, and c3 is an upper enclosure so the chain
constants stay on the safe (large) side.

The expectation lemma and the gap bound are checked against the exact
erasure-channel enumeration from ``channel``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from mpmath import mp, mpf

from .candidate import CandidateFunction
from .channel import iter_synthetic_bec
from .exactmath import bernstein_nonneg, float_log2_pair

__all__ = [
    "ChainConstants",
    "PolynomialDecayBounds",
    "t_function",
    "solve_eps",
    "compute_c3",
    "chain_constants",
    "blocklength_bound",
    "gap_bound_rhs",
    "lemma_expectation_check",
    "check_gap_bound_bec",
    "polynomial_decay_bounds",
    "check_minus_complement_inequality",
    "t_concavity_check",
]

DPS = 60


def _as_fraction(x) -> Fraction:
    """Fractions from floats go through repr so 4.714 means 4714/1000."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass
class ChainConstants:
    """The derived chain for one (mu, certified ratio, candidate, pe) tuple."""

    mu: Fraction
    p_e: mpf
    rho1: mpf
    alpha: mpf
    eps1: mpf
    eps2: mpf
    c3: mpf
    delta: mpf
    rho: mpf
    c1: mpf
    c2: mpf
    beta1: mpf
    identity_residual: mpf
    candidate: CandidateFunction | None = field(default=None, repr=False)

    def as_dict(self) -> dict:
        keys = ("mu", "rho1", "alpha", "delta", "c3", "eps1", "eps2", "rho", "c2", "beta1")
        out = {}
        for key in keys:
            val = getattr(self, key)
            out[key] = str(val) if isinstance(val, Fraction) else mp.nstr(val, 12)
        return out


def t_function(x, alpha) -> mpf:
    """t(x) = ((x(1+x))^alpha + ((2-x)(1-x)^(1/3))^alpha) / 2 on [0, 1]."""
    x = _mpf_of(x)
    alpha = _mpf_of(alpha)
    first = (x * (1 + x)) ** alpha if x > 0 else mpf(0)
    second = ((2 - x) * (1 - x) ** mpf("1/3")) ** alpha if x < 1 else mpf(0)
    return (first + second) / 2


def solve_eps(alpha, rho1, tol: float = 1e-12) -> tuple[mpf, mpf]:
    """The two crossings of t(x) = 2^(-rho1): returns (eps1, eps2) with the
    crossings at x = eps1 and x = 1 - eps2.

    t is concave with t(0) = t(1) = 2^(alpha-1) below the target, so there is
    one crossing on each side of the maximizer.  The left crossing can be
    doubly-exponentially small in 1/alpha, so it is bisected in log space
    (tolerance ``tol`` is relative there); the right crossing is bisected
    directly (absolute tolerance).
    """
    with mp.workdps(DPS):
        alpha = _mpf_of(alpha)
        rho1 = _mpf_of(rho1)
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        alpha_star = min(mpf("0.5"), rho1 / mp.log(mpf(4) / 3, 2))
        if alpha >= alpha_star:
            raise ValueError(
                f"alpha={float(alpha)} violates alpha < min(1/2, rho1/log2(4/3))"
            )
        target = mpf(2) ** (-rho1)
        # ternary search for the concave maximum
        lo, hi = mpf(0), mpf(1)
        for _ in range(160):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if t_function(m1, alpha) < t_function(m2, alpha):
                lo = m1
            else:
                hi = m2
        x_max = (lo + hi) / 2
        if t_function(x_max, alpha) <= target:
            raise ValueError("t never exceeds the target: no interior crossings")
        # left crossing, in u = ln x space
        u_hi = mp.log(x_max)
        u_lo = min(u_hi - 1, mpf(-40) / alpha)
        if not t_function(mp.e**u_lo, alpha) < target:
            raise ValueError("left bracket endpoint does not straddle the target")
        for _ in range(mp.prec):
            u_mid = (u_lo + u_hi) / 2
            if t_function(mp.e**u_mid, alpha) < target:
                u_lo = u_mid
            else:
                u_hi = u_mid
            if u_hi - u_lo < tol * max(1, abs(u_hi)):
                break
        eps1 = mp.e ** ((u_lo + u_hi) / 2)
        # right crossing, linear space
        a, b = x_max, mpf(1)
        if not t_function(b, alpha) < target:
            raise ValueError("right bracket endpoint does not straddle the target")
        for _ in range(mp.prec):
            m = (a + b) / 2
            if t_function(m, alpha) > target:
                a = m
            else:
                b = m
            if b - a < tol:
                break
        eps2 = 1 - (a + b) / 2
        return eps1, eps2


def compute_c3(h: CandidateFunction, alpha, eps1, eps2) -> mpf:
    """Upper enclosure of sup over (eps1, 1-eps2) of (x(1-x))^alpha / h(x).

    The candidate's tails are handled analytically (the ratio is monotone
    there, maximal at the eps endpoint); the piecewise-linear middle is
    bounded per piece by (max numerator over the piece) / (min endpoint
    value), evaluated in the log domain and inflated by 1e-9 to stay an
    upper bound despite float evaluation.
    """
    with mp.workdps(DPS):
        alpha = _mpf_of(alpha)
        eps1 = _mpf_of(eps1)
        eps2 = _mpf_of(eps2)
        if eps1 >= 1 - eps2:
            raise ValueError("empty interval: eps1 >= 1 - eps2")
        eta = mpf(h.eta.numerator) / h.eta.denominator
        ns, m_bar = h.ns, h.m_bar
        coef0 = mpf(h.v0.numerator) / h.v0.denominator * (mpf(ns) / m_bar) ** eta
        coef1 = mpf(h.v1.numerator) / h.v1.denominator * (mpf(ns) / m_bar) ** eta
        cands: list[mpf] = []
        lo_edge = mpf(1) / ns
        if eps1 < lo_edge:
            # ratio = (1-x)^alpha * x^(alpha-eta) / coef0, decreasing in x
            cands.append(eps1 ** (alpha - eta) / coef0)
        if eps2 < lo_edge:
            cands.append(eps2 ** (alpha - eta) / coef1)
        # piecewise middle
        xs = np.array([float(v) for v in h.xs])
        vs = np.array([float(v) for v in h.vs])
        f_eps1, f_eps2 = float(eps1), float(1 - eps2)
        xa, xb = xs[:-1], xs[1:]
        keep = (xb > f_eps1) & (xa < f_eps2)
        if np.any(keep):
            xa, xb = xa[keep], xb[keep]
            va, vb = vs[:-1][keep], vs[1:][keep]
            num = np.maximum(xa * (1 - xa), xb * (1 - xb))
            num[(xa < 0.5) & (xb > 0.5)] = 0.25
            logr = float(alpha) * np.log2(num) - np.log2(np.minimum(va, vb))
            cands.append(mpf(2) ** (mpf(float(np.max(logr))) + mpf("1e-9")))
        if not cands:
            raise ValueError("no candidate pieces overlap (eps1, 1-eps2)")
        return max(cands) * (1 + mpf("1e-9"))


def _mpf_of(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def _pow2(x) -> mpf:
    return mpf(2) ** _mpf_of(x)


def chain_constants(
    mu,
    sup_ratio,
    h: CandidateFunction | None = None,
    p_e=1e-3,
    c3=None,
) -> ChainConstants:
    """Evaluate the full chain from a certified supremum ratio.

    Requires the hypothesis sup_ratio < 2^(-1/mu) and mu > 2.  ``c3`` may be
    supplied directly (e.g. for identity tests); otherwise it is enclosed
    from the candidate ``h``.
    """
    mu = _as_fraction(mu)
    if mu <= 2:
        raise ValueError("mu must exceed 2")
    sup_ratio = _as_fraction(sup_ratio)
    with mp.workdps(DPS):
        a_pow = _pow2(-Fraction(mu.denominator, mu.numerator))  # 2^(-1/mu)
        sup_mpf = mpf(sup_ratio.numerator) / sup_ratio.denominator
        if not sup_mpf < a_pow:
            raise ValueError(
                f"hypothesis violated: sup ratio {float(sup_mpf)} is not below "
                f"2^(-1/mu) = {float(a_pow)}"
            )
        half_pow = _pow2(Fraction(-1, 2))
        if sup_mpf >= half_pow:
            b_pow = sup_mpf
            rho1 = -mp.log(b_pow, 2)
        else:
            rho1 = mpf("0.5")
            b_pow = half_pow
        gap = a_pow - b_pow
        alpha = mp.log(1 + gap / (a_pow + b_pow), 2)
        if not 0 < alpha < 1:
            raise ValueError(f"alpha = {float(alpha)} outside (0, 1)")
        eps1, eps2 = solve_eps(alpha, rho1)
        if c3 is None:
            if h is None:
                raise ValueError("need either a candidate h or an explicit c3")
            c3_val = compute_c3(h, alpha, eps1, eps2)
        else:
            c3_val = _mpf_of(c3)
        delta = gap / (2 * mp.sqrt(2) * c3_val + gap)
        if not 0 < delta < 1:
            raise ValueError(f"delta = {float(delta)} outside (0, 1)")
        rho = -mp.log(b_pow + mp.sqrt(2) * (delta / (1 - delta)) * c3_val, 2)
        residual = (rho - alpha) - mpf(mu.denominator) / mu.numerator
        pe = _mpf_of(p_e)
        if not 0 < pe < 1:
            raise ValueError("pe must lie in (0, 1)")
        c1 = 1 / delta
        c2 = mp.sqrt(2 * pe) + 2 * c1 * pe ** (-alpha)
        beta1 = c2 ** (mpf(mu.numerator) / mu.denominator)
        return ChainConstants(
            mu=mu,
            p_e=pe,
            rho1=rho1,
            alpha=alpha,
            eps1=eps1,
            eps2=eps2,
            c3=c3_val,
            delta=delta,
            rho=rho,
            c1=c1,
            c2=c2,
            beta1=beta1,
            identity_residual=residual,
            candidate=h,
        )


def blocklength_bound(constants: ChainConstants, capacity_gap) -> mpf:
    """Sufficient blocklength beta1 / gap^mu for the target error probability."""
    gap = mpf(capacity_gap)
    if gap <= 0:
        raise ValueError("capacity gap must be positive")
    with mp.workdps(DPS):
        return constants.beta1 / gap ** (mpf(constants.mu.numerator) / constants.mu.denominator)


def gap_bound_rhs(constants: ChainConstants, capacity, n: int) -> mpf:
    """RHS of the gap bound: capacity - c2 * 2^(-n (rho - alpha))."""
    with mp.workdps(DPS):
        return _mpf_of(capacity) - constants.c2 * _pow2(-(constants.rho - constants.alpha) * n)


@dataclass
class ExpectationReport:
    rows: list[tuple[int, float, mpf, bool]]

    @property
    def all_ok(self) -> bool:
        return all(ok for *_, ok in self.rows)


def lemma_expectation_check(z0, constants: ChainConstants, n_max: int = 16) -> ExpectationReport:
    """Exact-enumeration check of E[(Z_n(1-Z_n))^alpha] <= (1/delta) * 2^(-rho n).

    The left side is the exact mean over all 2^n erasure-channel paths, with
    the power evaluated through float logs of the exact rationals (relative
    error ~1e-13, irrelevant against the chain's astronomical margins); the
    right side is the mpmath chain value.  A violation would falsify the
    implementation, so it is reported rather than raised.
    """
    z0 = Fraction(z0)
    if not 0 < z0 < 1:
        raise ValueError("z0 must lie strictly inside (0, 1)")
    alpha = float(constants.alpha)
    rows = []
    with mp.workdps(DPS):
        for n in range(n_max + 1):
            total = []
            for _, p, q in iter_synthetic_bec(z0, n):
                lg_z = float_log2_pair(p, q)
                lg_1mz = float_log2_pair(q - p, q)
                total.append(2.0 ** (alpha * (lg_z + lg_1mz)))
            lhs = math.fsum(total) / (1 << n)
            rhs = constants.c1 * _pow2(-constants.rho * n)
            rows.append((n, lhs, rhs, mpf(lhs) <= rhs))
    return ExpectationReport(rows)


def check_gap_bound_bec(
    z0, constants: ChainConstants, n: int
) -> tuple[Fraction, mpf, bool, bool]:
    """Exact P(Z_n <= pe 2^-n) for a BEC versus the chain's lower bound.

    Returns (lhs, rhs, holds, vacuous); the bound is vacuous when the RHS is
    not positive (expected at desk-scale n).
    """
    z0 = Fraction(z0)
    with mp.workdps(DPS):
        pe_frac = Fraction(mp.nstr(constants.p_e, 20))
        threshold = pe_frac * Fraction(1, 1 << n)
        count = 0
        for _, p, q in iter_synthetic_bec(z0, n):
            if p * threshold.denominator <= threshold.numerator * q:
                count += 1
        lhs = Fraction(count, 1 << n)
        capacity = 1 - z0  # exact for the BEC
        rhs = gap_bound_rhs(constants, mpf(capacity.numerator) / capacity.denominator, n)
        vacuous = rhs <= 0
        holds = vacuous or mpf(lhs.numerator) / lhs.denominator >= rhs
        return lhs, rhs, holds, vacuous


@dataclass
class PolynomialDecayBounds:
    """Modified chain for polynomially decaying error probability N^-nu."""

    nu: mpf
    alpha_reduced: mpf
    delta: mpf
    rho: mpf
    c4: mpf
    beta2: mpf
    exponent: mpf  # rho - (1+nu) alpha_reduced; equals 1/mu by the identity
    pe_bound: Callable[[float], mpf]
    blocklength_bound: Callable[[float], mpf]


def polynomial_decay_bounds(nu, constants: ChainConstants, c3=None) -> PolynomialDecayBounds:
    """Rebuild the chain with alpha a factor 1+nu smaller.

    delta and rho are recomputed from the reduced alpha (through eps and c3),
    which leaves rho - (1+nu)*alpha_reduced equal to 1/mu; the blocklength
    constant becomes beta2 = c4^mu with c4 = sqrt(2) + 2/delta.
    """
    with mp.workdps(DPS):
        nu = _mpf_of(nu)
        if nu < 0:
            raise ValueError("nu must be nonnegative")
        mu = constants.mu
        alpha_r = constants.alpha / (1 + nu)
        eps1, eps2 = solve_eps(alpha_r, constants.rho1)
        if c3 is None:
            if constants.candidate is None:
                raise ValueError(
                    "c3 must be recomputed at the reduced alpha: supply a chain "
                    "built from a candidate, or an explicit c3"
                )
            c3_val = compute_c3(constants.candidate, alpha_r, eps1, eps2)
        else:
            c3_val = _mpf_of(c3)
        a_pow = _pow2(-Fraction(mu.denominator, mu.numerator))
        b_pow = _pow2(-constants.rho1)
        gap = a_pow - b_pow
        delta = gap / (2 * mp.sqrt(2) * c3_val + gap)
        rho = -mp.log(b_pow + mp.sqrt(2) * (delta / (1 - delta)) * c3_val, 2)
        c4 = mp.sqrt(2) + 2 / delta
        mu_f = mpf(mu.numerator) / mu.denominator
        beta2 = c4**mu_f
        exponent = rho - (1 + nu) * alpha_r

        def pe_bound(n_block) -> mpf:
            return mpf(n_block) ** (-nu)

        def nb(gap_val) -> mpf:
            return beta2 / mpf(gap_val) ** mu_f

        return PolynomialDecayBounds(
            nu=nu,
            alpha_reduced=alpha_r,
            delta=delta,
            rho=rho,
            c4=c4,
            beta2=beta2,
            exponent=exponent,
            pe_bound=pe_bound,
            blocklength_bound=nb,
        )


# --- scalar inequality checkers ----------------------------------------------

_COMPLEMENT_BRACKET = [Fraction(c) for c in (2, 8, 3, 4, -4, -4, -1)]


def check_minus_complement_inequality(grid: int = 10_000) -> dict:
    """Verify (1-x)^4 (2 + 8x + 3x^2 + 4x^3 - 4x^4 - 4x^5 - x^6) >= 0 on [0,1].

    Exact rational evaluation on the grid k/grid, plus a certified Bernstein
    positivity proof of the degree-6 bracket (the (1-x)^4 factor is a square).
    """
    worst = None
    for k in range(grid + 1):
        x = Fraction(k, grid)
        bracket = sum(c * x**j for j, c in enumerate(_COMPLEMENT_BRACKET))
        val = (1 - x) ** 4 * bracket
        if val < 0:
            raise AssertionError(f"polynomial negative at x={x}")
        if worst is None or val < worst[1]:
            worst = (x, val)
    proven, witness = bernstein_nonneg(_COMPLEMENT_BRACKET)
    return {
        "grid_points": grid + 1,
        "grid_ok": True,
        "min_at": worst[0],
        "bernstein_proof": proven,
        "witness": witness,
    }


def t_concavity_check(alpha, pairs: int = 200, seed: int = 7) -> bool:
    """Midpoint concavity test t((a+b)/2) >= (t(a)+t(b))/2 on random pairs."""
    rng = np.random.default_rng(seed)
    with mp.workdps(40):
        for _ in range(pairs):
            a, b = sorted(rng.uniform(0, 1, size=2))
            if a == b:
                continue
            mid = t_function((mpf(a) + mpf(b)) / 2, alpha)
            chord = (t_function(a, alpha) + t_function(b, alpha)) / 2
            if mid < chord - mpf("1e-30"):
                return False
    return True
