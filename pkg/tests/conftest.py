import pytest
from fractions import Fraction

from polarscale.candidate import build_candidate
from polarscale.certify import certify
from polarscale.iteration import IterationConfig, iterate


@pytest.fixture(scope="session")
def bec_small_pipeline(tmp_path_factory):
    """A fast, fully-certified erasure pipeline shared across test modules.

    Coarse grid and delta_s keep it around a second; the certified bound is
    real, just looser than the desk/paper presets.
    """
    cfg = IterationConfig(ns=1500, ms=200, k=50, init_exponent=Fraction(2, 3), operator="bec")
    result = iterate(cfg)
    cand = build_candidate(result.h_final, Fraction(72, 100), 5, Fraction(1, 1000))
    path = tmp_path_factory.mktemp("cert") / "transcript.txt"
    bound = certify(cand, "bec", transcript_path=path)
    assert bound.success
    return {"result": result, "candidate": cand, "bound": bound, "transcript": path}


@pytest.fixture(scope="session")
def bmsc_small_pipeline():
    cfg = IterationConfig(ns=1200, ms=250, k=50, init_exponent=Fraction(3, 4), operator="bmsc")
    result = iterate(cfg)
    cand = build_candidate(result.h_final, Fraction(78, 100), 13, Fraction(1, 1000))
    bound = certify(cand, "bmsc")
    assert bound.success
    return {"result": result, "candidate": cand, "bound": bound}
