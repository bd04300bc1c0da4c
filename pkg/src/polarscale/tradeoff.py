"""Joint scaling of error probability and gap to capacity.

For gamma in (1/(1+mu), 1) the blocklength trades off against both targets:

    P_e  <=  N * 2^(-N^(gamma * h2inv((gamma(mu+1)-1)/(gamma mu))))
    N    <=  beta3 / (I(W) - R)^(mu/(1-gamma))

where h2inv is the inverse of the binary entropy on [0, 1/2].  Both exponents
increase in gamma: pushing the error probability down means accepting a worse
blocklength scaling.  The proof constants are

    c5 = sqrt(2) + 2/delta,  c6 = 2/(sqrt(2)-1)^2,
    c7 = 1 + sqrt(2) (c5 + c6 sqrt(2)/ln 2),  beta3 = c7^mu.

A variant bounds P_e by a power of the channel's Bhattacharyya parameter,
P_e <= N * Z(W)^((1/2) N^pe_exponent); its remaining constants have no closed
form here and are reported symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .channel import iter_synthetic_bec
from .exactmath import float_log2_pair

__all__ = [
    "h2",
    "h2_inv",
    "TradeoffPoint",
    "tradeoff_point",
    "JointConstants",
    "joint_constants",
    "binomial_tail_check",
    "z_dependent_exponents",
    "joint_scaling_check_bec",
]

_TOL = 1e-12


def h2(x: float) -> float:
    """Binary entropy -x log2 x - (1-x) log2(1-x) with the 0 log 0 = 0 convention."""
    if not 0 <= x <= 1:
        raise ValueError(f"h2 argument {x} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def h2_inv(y: float, tol: float = _TOL) -> float:
    """Inverse of h2 on [0, 1/2] by bisection to absolute tolerance ``tol``."""
    if not 0 <= y <= 1:
        raise ValueError(f"h2_inv argument {y} outside [0, 1]")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h2(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TradeoffPoint:
    gamma: float
    mu: float
    pe_exponent: float  # gamma * h2inv((gamma(mu+1)-1)/(gamma mu)), in (0, 1/2)
    gap_exponent: float  # mu / (1-gamma), > mu

    def pe_bound(self, n_block: float) -> float:
        return n_block * 2.0 ** (-(n_block**self.pe_exponent))


def tradeoff_point(gamma: float, mu: float) -> TradeoffPoint:
    """Both trade-off exponents at one gamma in (1/(1+mu), 1)."""
    if mu <= 2:
        raise ValueError("mu must exceed 2")
    if not 1 / (1 + mu) < gamma < 1:
        raise ValueError(f"gamma {gamma} outside (1/(1+mu), 1) = ({1/(1+mu):.6f}, 1)")
    arg = (gamma * (mu + 1) - 1) / (gamma * mu)
    return TradeoffPoint(
        gamma=gamma,
        mu=mu,
        pe_exponent=gamma * h2_inv(arg),
        gap_exponent=mu / (1 - gamma),
    )


@dataclass(frozen=True)
class JointConstants:
    c5: float
    c6: float
    c7: float
    beta3: float


def joint_constants(delta: float, mu: float) -> JointConstants:
    """c5 = sqrt2 + 2/delta, c6 = 2/(sqrt2-1)^2, c7 = 1 + sqrt2 (c5 + c6 sqrt2/ln2), beta3 = c7^mu."""
    delta = float(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    c5 = math.sqrt(2) + 2 / delta
    c6 = 2 / (math.sqrt(2) - 1) ** 2
    c7 = 1 + math.sqrt(2) * (c5 + c6 * math.sqrt(2) / math.log(2))
    return JointConstants(c5=c5, c6=c6, c7=c7, beta3=c7**mu)


def binomial_tail_check(n1: int, eps: float) -> dict:
    """Exact fair-coin tail P(sum B_i <= floor(n1 eps)) versus 2^(-n1(1-h2(eps))).

    The tail is an exact rational; the entropy bound is evaluated in floats
    with a tiny tolerance credited to the bound (it holds with real margin
    everywhere except the eps -> 0 equality case).
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if n1 < 1 or n1 > 60:
        raise ValueError("n1 must lie in 1..60 for exact tails")
    cut = math.floor(n1 * eps)
    tail = Fraction(sum(math.comb(n1, k) for k in range(cut + 1)), 1 << n1)
    bound = 2.0 ** (-n1 * (1 - h2(eps)))
    holds = float(tail) <= bound * (1 + 1e-12)
    return {"n1": n1, "eps": eps, "tail": tail, "bound": bound, "holds": holds}


def z_dependent_exponents(gamma: float, mu: float) -> dict:
    """The Bhattacharyya-power form: P_e <= N * Z(W)^((1/2) N^pe_exponent).

    Returns the exponent evaluator in N plus the symbolic placeholders for the
    constants this variant does not pin down.
    """
    point = tradeoff_point(gamma, mu)

    def z_exponent(n_block: float) -> float:
        return 0.5 * n_block**point.pe_exponent

    return {
        "point": point,
        "z_exponent": z_exponent,
        "beta4": "unspecified",
        "c8": "unspecified",
        "c9": "unspecified",
    }


def joint_scaling_check_bec(
    z0,
    n: int,
    gamma: float,
    mu: float,
    c7: float,
    capacity: float | None = None,
) -> dict:
    """Exact-enumeration check of the joint-scaling probability bound on a BEC.

    With n1 = ceil(gamma n), n0 = n - n1, counts the exact fraction of depth-n
    synthetic channels with Z below 2^(-2^(n gamma h2inv(...))) and compares
    it to I(W) - c7 * 2^(-n(1-gamma)/mu).  The RHS is often nonpositive at
    desk-scale n, which is reported as vacuous rather than failed.
    """
    z0 = Fraction(z0)
    if not 0 < z0 < 1:
        raise ValueError("z0 must lie strictly inside (0, 1)")
    point = tradeoff_point(gamma, mu)
    threshold_log2 = -(2.0 ** (n * point.pe_exponent))
    count = 0
    for _, p, q in iter_synthetic_bec(z0, n):
        if p == q:
            continue
        if float_log2_pair(p, q) <= threshold_log2:
            count += 1
    lhs = Fraction(count, 1 << n)
    cap = float(1 - z0) if capacity is None else capacity
    rhs = cap - c7 * 2.0 ** (-n * (1 - gamma) / mu)
    return {
        "n": n,
        "n1": math.ceil(gamma * n),
        "n0": n - math.ceil(gamma * n),
        "lhs": lhs,
        "rhs": rhs,
        "vacuous": rhs <= 0,
        "holds": float(lhs) >= rhs,
    }
