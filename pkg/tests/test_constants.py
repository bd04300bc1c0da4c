import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from polarscale.constants import (
    check_gap_bound_bec,
    check_minus_complement_inequality,
    compute_c3,
    lemma_expectation_check,
    polynomial_decay_bounds,
    solve_eps,
    t_concavity_check,
    t_function,
    chain_constants,
    blocklength_bound,
)


def test_t_endpoints_and_midpoint():
    for alpha in (0.1, 0.3, 0.45):
        assert abs(float(t_function(0, alpha)) - 2.0 ** (alpha - 1)) < 1e-12
        assert abs(float(t_function(1, alpha)) - 2.0 ** (alpha - 1)) < 1e-12
        # t(1/2) > 2^(-rho1) for rho1 <= 1/2, alpha < alpha*
        assert float(t_function(0.5, alpha)) > 2.0 ** (-0.5)


def test_solve_eps_against_bruteforce():
    alpha, rho1 = 0.1, 0.2
    eps1, eps2 = solve_eps(alpha, rho1)
    target = 2.0**-rho1
    # dense-grid localization oracle
    xs = [k / 200_000 for k in range(1, 200_000)]
    crossings = []
    prev = float(t_function(xs[0], alpha)) - target
    for x in xs[1:]:
        cur = float(t_function(x, alpha)) - target
        if prev < 0 <= cur or prev >= 0 > cur:
            crossings.append(x)
        prev = cur
    assert len(crossings) == 2
    assert abs(float(eps1) - crossings[0]) < 1e-4
    assert abs(float(1 - eps2) - crossings[1]) < 1e-4
    # bracket verification at +-1e-9
    assert float(t_function(float(eps1) - 1e-9, alpha)) < target
    assert float(t_function(float(eps1) + 1e-9, alpha)) > target


def test_solve_eps_rejects_large_alpha():
    with pytest.raises(ValueError):
        solve_eps(0.49, 0.2)  # alpha* = 0.2/log2(4/3) ~ 0.482


def test_c3_identity_candidate(bec_small_pipeline):
    """c3 = 1 when h equals the numerator shape; doubles when h is halved."""
    cand = bec_small_pipeline["candidate"]
    alpha = float(cand.eta)  # reuse eta as a moderate alpha
    # candidate built from (x(1-x))^eta samples would give ratio ~ 1; here we
    # only check homogeneity: scaling h by 1/2 doubles the enclosure.
    c_base = compute_c3(cand, alpha, mpf("1e-9"), mpf("1e-9"))
    half = type(cand)(
        ns=cand.ns,
        eta=cand.eta,
        m_bar=cand.m_bar,
        delta_s=cand.delta_s,
        xs=cand.xs,
        vs=[v / 2 for v in cand.vs],
        v0=cand.v0 / 2,
        v1=cand.v1 / 2,
    )
    c_half = compute_c3(half, alpha, mpf("1e-9"), mpf("1e-9"))
    assert abs(float(c_half / c_base) - 2.0) < 1e-6


def test_c3_exact_shape_is_one():
    import numpy as np
    from polarscale.candidate import build_candidate

    ns = 500
    x = np.arange(ns + 1) / ns
    alpha = 0.7
    h = (x * (1 - x)) ** alpha
    cand = build_candidate(h / h.max(), Fraction(7, 10), 4, Fraction(1, 100))
    # h equals (x(1-x))^alpha (normalized by max = 4^alpha), so the ratio is
    # constant 4^-alpha... times the normalization: c3 = max(x(1-x))^alpha = 4^-alpha inverse
    c3 = compute_c3(cand, alpha, mpf("0.01"), mpf("0.01"))
    # h = (x(1-x))^a normalized by its max (1/4)^a, so the ratio is the
    # constant (1/4)^a everywhere
    expect = 0.25**alpha
    # the tail enclosure drops a (1-x)^alpha <= 1 factor, costing ~(1-eps)^-a
    assert abs(float(c3) / expect - 1) < 2e-2


def test_identity_rho_minus_alpha(bec_small_pipeline):
    bound = bec_small_pipeline["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=bec_small_pipeline["candidate"])
    assert abs(float(chain.identity_residual)) < 1e-12
    assert 0 < chain.alpha < 1
    assert 0 < chain.delta < 1  # delta can be astronomically small: compare as mpf
    assert float(chain.rho) <= float(chain.rho1) <= 0.5


def test_identity_grid_synthetic():
    """rho - alpha = 1/mu across a (mu, rho1) grid satisfying the hypothesis."""
    for mu in (Fraction(5, 2), Fraction(3), Fraction(3639, 1000), Fraction(4714, 1000), Fraction(11, 2)):
        for rho1_scale in (Fraction(55, 100), Fraction(75, 100), Fraction(95, 100)):
            # pick sup = 2^(-rho1) with rho1 between 1/mu and 1/2
            rho1 = Fraction(1, 2) * rho1_scale + Fraction(mu.denominator, mu.numerator) * (1 - rho1_scale)
            sup = Fraction(
                int(2.0 ** (-float(rho1)) * 10**9) + 1, 10**9
            )
            if not sup < 2 ** (-1 / float(mu)):
                continue
            chain = chain_constants(mu, sup, c3=25.0)
            assert abs(float(chain.identity_residual)) < 1e-12


def test_hypothesis_rejected():
    with pytest.raises(ValueError):
        chain_constants(Fraction(3), Fraction(9, 10), c3=10.0)  # 0.9 > 2^(-1/3)
    with pytest.raises(ValueError):
        chain_constants(Fraction(3, 2), Fraction(1, 2), c3=10.0)  # mu <= 2


def test_lemma_expectation_small_chain(bec_small_pipeline):
    bound = bec_small_pipeline["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=bec_small_pipeline["candidate"])
    for z0 in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        report = lemma_expectation_check(z0, chain, n_max=10)
        assert report.all_ok
        # n = 0 sanity: lhs <= 1 <= 1/delta
        n0, lhs0, rhs0, ok0 = report.rows[0]
        assert lhs0 <= 1.0 and rhs0 >= 1 and ok0


def test_gap_bound_check(bec_small_pipeline):
    bound = bec_small_pipeline["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=bec_small_pipeline["candidate"])
    lhs, rhs, holds, vacuous = check_gap_bound_bec(Fraction(1, 2), chain, 10)
    assert holds
    assert 0 <= lhs <= 1


def test_blocklength_bound_monotone(bec_small_pipeline):
    bound = bec_small_pipeline["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=bec_small_pipeline["candidate"])
    assert blocklength_bound(chain, 0.01) > blocklength_bound(chain, 0.02)
    with pytest.raises(ValueError):
        blocklength_bound(chain, 0)


def test_polynomial_decay_recovers_base_chain(bec_small_pipeline):
    bound = bec_small_pipeline["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=bec_small_pipeline["candidate"])
    r2 = polynomial_decay_bounds(1.0, chain)
    # the modified chain keeps rho - (1+nu) alpha' = 1/mu
    assert abs(float(r2.exponent) - 1 / float(chain.mu)) < 1e-10
    # c4 = sqrt(2) + 2/delta; both sides can overflow floats, so compare in logs
    assert abs(mp.log(r2.c4) - mp.log(mp.sqrt(2) + 2 / r2.delta)) < mpf("1e-30")
    r0 = polynomial_decay_bounds(0.0, chain)
    assert abs(float(r0.alpha_reduced) - float(chain.alpha)) < 1e-15
    assert float(r2.pe_bound(1024)) == pytest.approx(1 / 1024)


def test_minus_complement_polynomial():
    report = check_minus_complement_inequality(grid=4000)
    assert report["grid_ok"]
    assert report["bernstein_proof"]
    # boundary values: 2 at x=0, 0 at x=1
    from polarscale.constants import _COMPLEMENT_BRACKET

    assert sum(c * Fraction(0) ** k for k, c in enumerate(_COMPLEMENT_BRACKET)) == 2
    x = Fraction(1)
    assert (1 - x) ** 4 == 0


def test_t_concavity():
    for alpha in (0.05, 0.2, 0.4):
        assert t_concavity_check(alpha)
