"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they complete.  The desk-scale certification fixtures take a couple
of minutes; the full paper-preset runs (hours) are gated behind
POLARSCALE_NIGHTLY=1.

Criterion 10's gamma -> 1 endpoint is asserted at its stated tolerance even
though that tolerance is analytically unattainable at the stated evaluation
point (the approach to 1/2 is square-root slow: the exponent misses 1/2 by
~sqrt(1e-4 * ln2 / (2 mu)) ~ 2.8e-3 > 1e-3 at gamma = 1 - 1e-4).  The
assertion is kept faithful and is expected to fail; the supplementary limit
checks directly before it demonstrate the limit itself is correct.
"""

import os
from fractions import Fraction

import numpy as np
import pytest

from polarscale.candidate import build_candidate
from polarscale.certify import certify
from polarscale.channel import construct_polar_code, synthetic_profile_bec, union_bound_pe
from polarscale.constants import (
    check_minus_complement_inequality,
    lemma_expectation_check,
    t_concavity_check,
    chain_constants,
)
from polarscale.floors import (
    _ProfileLogCache,
    check_threshold_inequality,
    floor_sweep,
    verify_domination_bec,
)
from polarscale.iteration import IterationConfig, iterate
from polarscale.presets import PRESETS
from polarscale.simulate import SimConfig, simulate, wilson_interval
from polarscale.tradeoff import binomial_tail_check, tradeoff_point
from polarscale.transcript import verify_transcript

H = Fraction(1, 2)
THREADS = min(4, os.cpu_count() or 1)

# anchors recorded from the first desk-scale runs (deterministic kernels)
DESK_BEC_MU_ANCHOR = 2839 / 774  # ~3.6680
DESK_BMSC_MU_ANCHOR = 3112 / 651  # ~4.7803


def _report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def _run_pipeline(preset_name: str, tmp_dir):
    preset = PRESETS[preset_name]
    cfg = IterationConfig(
        ns=preset.ns,
        ms=preset.ms,
        k=preset.k,
        init_exponent=preset.init_exponent,
        operator=preset.operator,
        threads=THREADS,
    )
    result = iterate(cfg)
    cand = build_candidate(result.h_final, preset.eta, preset.m_bar, preset.delta_s)
    transcript = tmp_dir / f"{preset_name}-transcript.txt.gz"
    bound = certify(cand, preset.operator, transcript_path=transcript)
    return {"result": result, "candidate": cand, "bound": bound, "transcript": transcript}


@pytest.fixture(scope="module")
def desk_bec(tmp_path_factory):
    return _run_pipeline("desk-bec", tmp_path_factory.mktemp("desk_bec"))


@pytest.fixture(scope="module")
def desk_bmsc(tmp_path_factory):
    return _run_pipeline("desk-bmsc", tmp_path_factory.mktemp("desk_bmsc"))


def test_criterion_01_eigen_iteration_limit_bmsc():
    cfg = IterationConfig(
        ns=10_000, ms=1_000, k=100, init_exponent=Fraction(3, 4), operator="bmsc",
        threads=THREADS,
    )
    rhat = iterate(cfg).rhat
    ok = abs(rhat - 0.86275) <= 5e-3
    _report("1 eigen-iteration limit (general)", ok, f"rhat={rhat:.6f} vs 0.86275 +- 5e-3")
    assert ok


def test_criterion_02_eigen_iteration_limit_bec():
    cfg = IterationConfig(
        ns=10_000, ms=1, k=100, init_exponent=Fraction(2, 3), operator="bec",
    )
    rhat = iterate(cfg).rhat
    target = 2.0 ** (-1 / 3.627)
    ok = abs(rhat - target) <= 5e-3
    _report("2 eigen-iteration limit (erasure)", ok, f"rhat={rhat:.6f} vs {target:.6f} +- 5e-3")
    assert ok


def test_criterion_03_desk_scale_certification(desk_bec, desk_bmsc):
    mu_bec = float(desk_bec["bound"].mu)
    mu_bmsc = float(desk_bmsc["bound"].mu)
    ok = (
        desk_bec["bound"].success
        and desk_bmsc["bound"].success
        and mu_bec < 3.8
        and mu_bmsc < 5.0
        and abs(mu_bec - DESK_BEC_MU_ANCHOR) < 0.02
        and abs(mu_bmsc - DESK_BMSC_MU_ANCHOR) < 0.02
    )
    _report(
        "3 desk-scale certification",
        ok,
        f"mu(erasure)={mu_bec:.4f} (<3.8, anchor {DESK_BEC_MU_ANCHOR:.4f}); "
        f"mu(general)={mu_bmsc:.4f} (<5.0, anchor {DESK_BMSC_MU_ANCHOR:.4f})",
    )
    assert ok


def test_criterion_04_transcript_soundness(desk_bec, desk_bmsc):
    total_checked = 0
    total_failures = 0
    for pipe in (desk_bec, desk_bmsc):
        checked, failures = verify_transcript(pipe["transcript"])
        total_checked += checked
        total_failures += len(failures)
    ok = total_failures == 0
    _report(
        "4 transcript soundness", ok,
        f"{total_checked} inequalities replayed, {total_failures} failures",
    )
    assert ok


def test_criterion_05_constant_chain_identity():
    worst = 0.0
    cases = 0
    for mu in (Fraction(5, 2), Fraction(3), Fraction(3639, 1000), Fraction(4714, 1000), Fraction(6)):
        for k in range(1, 6):
            # sup ratio 2^(-rho1) with rho1 between 1/mu and 1/2
            inv_mu = 1 / float(mu)
            rho1 = inv_mu + (0.5 - inv_mu) * k / 6
            sup = Fraction(int(2.0 ** (-rho1) * 10**9), 10**9)
            if not float(sup) < 2.0 ** (-inv_mu):
                continue
            chain = chain_constants(mu, sup, c3=37.5)
            worst = max(worst, abs(float(chain.identity_residual)))
            cases += 1
    ok = cases >= 20 and worst < 1e-12
    _report("5 constant-chain identity", ok, f"{cases} chains, max |rho-alpha-1/mu| = {worst:.2e}")
    assert ok


def test_criterion_06_lemma_expectation_bound(desk_bec):
    bound = desk_bec["bound"]
    chain = chain_constants(bound.mu, bound.sup_bound, h=desk_bec["candidate"])
    violations = 0
    rows = 0
    for z0 in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        report = lemma_expectation_check(z0, chain, n_max=16)
        rows += len(report.rows)
        violations += sum(0 if ok else 1 for *_, ok in report.rows)
    ok = violations == 0
    _report("6 lemma expectation bound", ok, f"{rows} (z0, n) pairs checked, {violations} violations")
    assert ok


def test_criterion_07_domination_exhaustive():
    cache = _ProfileLogCache()
    checked = violations = undecided = 0
    for a in range(1, 16):
        for b in range(a, 16):
            rep = verify_domination_bec(Fraction(a, 16), Fraction(b, 16), 12, cache=cache)
            checked += rep["checked"]
            violations += len(rep["violations"])
            undecided += len(rep["undecided"])
    ok = violations == 0 and undecided == 0
    _report(
        "7 domination exhaustive", ok,
        f"{checked} index checks over the 1/16..15/16 grid, "
        f"{violations} violations, {undecided} undecided",
    )
    assert ok


def test_criterion_08_error_floor_sweep():
    code = construct_polar_code(H, 10, 512)
    zs = [Fraction(k, 100) for k in range(5, 51)]
    report = floor_sweep(code, zs)
    threshold = report.reference_exponent * (1 - 0.10)
    ok = report.min_slope >= 1.0 and report.min_slope >= threshold
    _report(
        "8 error-floor sweep", ok,
        f"min log-log slope {report.min_slope:.3f} (>= 1 and >= {threshold:.3f})",
    )
    assert ok


def test_criterion_09_simulator_vs_bound():
    all_ok = True
    details = []
    for n in (4, 6, 8):
        code = construct_polar_code(H, n, 1 << (n - 1))
        for z in (Fraction(1, 5), Fraction(3, 10), Fraction(2, 5), Fraction(1, 2)):
            res = simulate(SimConfig(code=code, z=z, trials=100_000, seed=2026))
            bound = float(union_bound_pe(code, z))
            half = (res.ci_hi - res.ci_lo) / 2
            if res.point_estimate > min(1.0, bound) + half:
                all_ok = False
                details.append(f"n={n} z={z}: {res.point_estimate:.4f} > {bound:.4f}")
    single = construct_polar_code(H, 2, 1)
    res = simulate(SimConfig(code=single, z=H, trials=100_000, seed=7))
    exact = float(synthetic_profile_bec(H, 2)[3])
    in_ci = res.ci_lo <= exact <= res.ci_hi
    ok = all_ok and in_ci
    _report(
        "9 simulator vs union bound", ok,
        f"12 (code, z) grid points within bound+CI; single-info-bit exact {exact:.4f} "
        f"in [{res.ci_lo:.4f}, {res.ci_hi:.4f}]" + ("; " + "; ".join(details) if details else ""),
    )
    assert ok


def test_criterion_10_moderate_deviation_endpoints():
    mu = 4.714
    # supplementary: the limit itself is correct (sqrt-rate approach)
    assert abs(tradeoff_point(1 - 1e-8, mu).pe_exponent - 0.5) <= 1e-3
    lo_end = tradeoff_point((1 + 1e-6) / (1 + mu), mu)
    assert lo_end.pe_exponent < 1e-6
    assert abs(lo_end.gap_exponent - (mu + 1)) < 1e-3
    tails_ok = all(
        binomial_tail_check(n1, eps)["holds"]
        for n1 in range(1, 31)
        for eps in (0.05, 0.15, 0.25, 0.35, 0.45)
    )
    assert tails_ok
    point = tradeoff_point(1 - 1e-4, mu)
    gap = abs(point.pe_exponent - 0.5)
    ok = gap <= 1e-3 and tails_ok
    _report(
        "10 moderate-deviation endpoints", ok,
        f"pe_exponent(1-1e-4) = {point.pe_exponent:.6f}, |gap to 1/2| = {gap:.2e} "
        f"(stated tolerance 1e-3 is below the sqrt-rate floor ~2.8e-3; "
        f"limit verified at gamma=1-1e-8; binomial tails exhaustive: {tails_ok})",
    )
    # Faithful to the stated criterion; analytically unattainable at
    # gamma = 1 - 1e-4 (see the module docstring and the decisions ledger).
    assert ok


def test_criterion_11_proof_inequality_suite():
    y2 = check_minus_complement_inequality(grid=10_000)
    y2_ok = y2["grid_ok"] and y2["bernstein_proof"]
    thresh_ok = True
    for eta in (Fraction(2), Fraction(5, 2), Fraction(3)):
        thresh_ok &= check_threshold_inequality("square", eta, grid=10_000)["holds_everywhere"]
    for eta in (Fraction(1), Fraction(3, 2), Fraction(2)):
        thresh_ok &= check_threshold_inequality("linear", eta, grid=10_000)["holds_everywhere"]
    below_sq = check_threshold_inequality("square", Fraction(19, 10), grid=10_000)
    below_lin = check_threshold_inequality("linear", Fraction(9, 10), grid=10_000)
    counter_ok = bool(below_sq["violations"]) and bool(below_lin["violations"])
    conc_ok = all(t_concavity_check(alpha, pairs=10_000 // 2) for alpha in (0.1, 0.3, 0.45))
    ok = y2_ok and thresh_ok and counter_ok and conc_ok
    _report(
        "11 proof-inequality suite", ok,
        f"polynomial positivity {y2_ok}; thresholds hold at/above {thresh_ok}; "
        f"counterexamples below {counter_ok}; concavity {conc_ok}",
    )
    assert ok


@pytest.mark.nightly
@pytest.mark.skipif(
    not os.environ.get("POLARSCALE_NIGHTLY"),
    reason="paper-preset certification takes hours; set POLARSCALE_NIGHTLY=1",
)
@pytest.mark.parametrize(
    "preset,target_mu", [("paper-bec", 3.639), ("paper-bmsc", 4.714)]
)
def test_nightly_paper_presets(preset, target_mu, tmp_path):
    pipe = _run_pipeline(preset, tmp_path)
    mu = float(pipe["bound"].mu)
    ok = pipe["bound"].success and mu <= target_mu
    _report(f"nightly {preset}", ok, f"certified mu={mu:.4f} vs target {target_mu}")
    assert ok
