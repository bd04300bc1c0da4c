import numpy as np
import pytest
from fractions import Fraction

from polarscale.candidate import CandidateFunction, build_candidate
from polarscale.exactmath import rational_le_power


def _samples(ns=400, exponent=0.7):
    x = np.arange(ns + 1) / ns
    h = (x * (1 - x)) ** exponent
    return h / h.max()


def _build(ns=400, eta=Fraction(72, 100), m_bar=5, delta_s=Fraction(1, 200)):
    return build_candidate(_samples(ns), eta, m_bar, delta_s)


def test_breakpoints_span_and_adjacency():
    cand = _build()
    cand.validate()
    assert cand.xs[0] == Fraction(1, 400)
    assert cand.xs[-1] == Fraction(399, 400)
    one_plus = 1 + cand.delta_s
    for va, vb in zip(cand.vs, cand.vs[1:]):
        assert max(va, vb) <= one_plus * min(va, vb)


def test_junction_values_exact():
    cand = _build()
    i0 = cand.xs.index(Fraction(cand.m_bar, cand.ns))
    assert cand.vs[i0] == cand.v0
    i1 = cand.xs.index(1 - Fraction(cand.m_bar, cand.ns))
    assert cand.vs[i1] == cand.v1


def test_tail_samples_below_tail():
    cand = _build()
    edge = Fraction(cand.m_bar, cand.ns)
    base = Fraction(cand.ns, cand.m_bar)
    for x, v in zip(cand.xs, cand.vs):
        if x <= edge:
            assert rational_le_power(v / cand.v0, base * x, cand.eta)


def test_left_edge_concave():
    """Midpoint-over-chord on [0, 2/ns]: the tail region of the candidate."""
    cand = _build()
    pts = [Fraction(1, 2 * cand.ns), Fraction(1, cand.ns), Fraction(3, 2 * cand.ns), Fraction(2, cand.ns)]
    vals = [cand.evaluate_float(np.array([float(p)]))[0] for p in pts]
    for i in range(1, 3):
        assert vals[i] >= (vals[i - 1] + vals[i + 1]) / 2 - 1e-12


def test_values_positive_and_bounded():
    cand = _build()
    assert all(0 < v <= 1 for v in cand.vs)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_candidate(_samples(), Fraction(3, 2), 5, Fraction(1, 100))
    with pytest.raises(ValueError):
        build_candidate(_samples(), Fraction(1, 2), 1, Fraction(1, 100))
    with pytest.raises(ValueError):
        build_candidate(_samples(), Fraction(1, 2), 5, Fraction(0))
    bad = _samples()
    bad[150] = 0.0
    with pytest.raises(ValueError):
        build_candidate(bad, Fraction(1, 2), 5, Fraction(1, 100))


def test_roundtrip_serialization(tmp_path):
    cand = _build(ns=200)
    csv_path = tmp_path / "cand.csv"
    json_path = tmp_path / "cand.json"
    cand.write(csv_path, json_path)
    back = CandidateFunction.load(csv_path, json_path)
    assert back.xs == cand.xs
    assert back.vs == cand.vs
    assert back.eta == cand.eta and back.m_bar == cand.m_bar
    assert back.v0 == cand.v0 and back.v1 == cand.v1


def test_evaluate_float_matches_breakpoints():
    cand = _build(ns=200)
    xs = np.array([float(x) for x in cand.xs[::7]])
    vals = cand.evaluate_float(xs)
    expect = np.array([float(v) for v in cand.vs[::7]])
    assert np.abs(vals - expect).max() < 1e-12


def test_smaller_delta_means_more_breakpoints():
    coarse = _build(delta_s=Fraction(1, 100))
    fine = _build(delta_s=Fraction(1, 1000))
    assert len(fine.xs) > len(coarse.xs)
