import csv
import json
from fractions import Fraction

import pytest

from polarscale.cli import main, parse_rational


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_rational():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("2") == Fraction(2)
    assert parse_rational("0.25") == Fraction(1, 4)
    with pytest.raises(ValueError):
        parse_rational("abc")


def test_enumerate_stdout(capsys):
    code, out, _ = run(capsys, "enumerate", "--z", "1/2", "--n", "2")
    assert code == 0
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0] == ["index", "bits", "z_exact_num", "z_exact_den", "z_float"]
    assert rows[1][:4] == ["1", "00", "15", "16"]
    assert rows[4][:4] == ["4", "11", "1", "16"]


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--z", "1/2"])  # missing --n
    assert exc.value.code == 2


def test_iterate_outputs(tmp_path, capsys):
    code, out, err = run(
        capsys,
        "iterate",
        "--operator", "bec",
        "--ns", "500", "--ms", "1", "--k", "8",
        "--init-exponent", "2/3",
        "--out-rhat", str(tmp_path / "rhat.csv"),
        "--out-samples", str(tmp_path / "samples.csv"),
        "--plot", str(tmp_path / "h.svg"),
    )
    assert code == 0
    rhat_rows = list(csv.reader((tmp_path / "rhat.csv").open()))
    assert rhat_rows[0] == ["k", "rhat"]
    assert len(rhat_rows) == 9
    sample_rows = list(csv.reader((tmp_path / "samples.csv").open()))
    assert sample_rows[0] == ["x", "h"]
    assert len(sample_rows) == 502
    assert (tmp_path / "h.svg").read_text().startswith("<?xml")
    assert "final rhat" in out


def test_certify_and_verify_roundtrip(tmp_path, capsys):
    out_dir = tmp_path / "cert"
    code, out, err = run(
        capsys,
        "certify",
        "--operator", "bec",
        "--ns", "600", "--ms", "1", "--k", "30",
        "--init-exponent", "2/3",
        "--eta", "72/100", "--m-bar", "5", "--delta-s", "1/500",
        "--out-dir", str(out_dir),
    )
    assert code == 0
    assert "certified mu <=" in out
    result = json.loads((out_dir / "result.json").read_text())
    assert result["success"] is True
    assert result["mu_float"] < 4.2
    code2, out2, _ = run(capsys, "verify-transcript", str(out_dir / "transcript.txt"))
    assert code2 == 0
    assert "re-verified" in out2
    # candidate files exist and reload
    from polarscale.candidate import CandidateFunction

    cand = CandidateFunction.load(out_dir / "candidate.csv", out_dir / "candidate.json")
    assert cand.ns == 600


def test_certify_failure_exit_code(tmp_path, capsys):
    code, out, err = run(
        capsys,
        "certify",
        "--operator", "bec",
        "--ns", "400", "--ms", "1", "--k", "10",
        "--init-exponent", "2/3",
        "--eta", "999/1000", "--m-bar", "4", "--delta-s", "1/100",
        "--out-dir", str(tmp_path / "fail"),
    )
    assert code == 1
    assert "failed" in out


def test_tradeoff_csv(capsys):
    code, out, _ = run(capsys, "tradeoff", "--mu", "4.714", "--gamma-grid", "0.3:0.9:0.1")
    assert code == 0
    rows = list(csv.reader(out.strip().splitlines()))
    assert rows[0] == ["gamma", "pe_exponent", "gap_exponent"]
    pes = [float(r[1]) for r in rows[1:]]
    gaps = [float(r[2]) for r in rows[1:]]
    assert all(a < b for a, b in zip(pes, pes[1:]))
    assert all(a < b for a, b in zip(gaps, gaps[1:]))


def test_floor_verify_modes(capsys):
    code, out, _ = run(capsys, "floor-verify", "--mode", "bec", "--z", "1/4", "--z-prime", "1/2", "--n-max", "5")
    assert code == 0 and "0 violations" in out
    code, out, _ = run(
        capsys, "floor-verify", "--mode", "corollary", "--z", "1/4", "--z-prime", "1/2", "--n-max", "6",
    )
    assert code == 0 and "holds = True" in out
    code, out, _ = run(
        capsys, "floor-verify", "--mode", "intervals",
        "--z-lo", "1/5", "--z-hi", "1/5", "--zp-lo", "1/2", "--zp-hi", "1/2", "--n-max", "6",
    )
    assert code == 0


def test_floor_sweep_outputs(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "floor-sweep",
        "--n", "6", "--rate", "1/2", "--design-z", "1/2",
        "--z-grid", "0.1:0.5:0.1",
        "--out", str(tmp_path / "sweep.csv"),
        "--plot", str(tmp_path / "sweep.svg"),
    )
    assert code == 0
    rows = list(csv.reader((tmp_path / "sweep.csv").open()))
    assert rows[0] == ["z", "pe_tilde", "log_slope"]
    assert len(rows) == 6
    assert (tmp_path / "sweep.svg").exists()
    assert "min log-log slope" in out


def test_simulate_json(capsys):
    code, out, _ = run(
        capsys, "simulate", "--n", "3", "--k", "2", "--z", "1/2", "--trials", "2000", "--seed", "9",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["trials"] == 2000
    assert payload["generator_id"] == "philox4x64"
    assert 0 <= payload["ci_lo"] <= payload["estimate"] <= payload["ci_hi"] <= 1


def test_constants_json(capsys, tmp_path, bec_small_pipeline):
    cand = bec_small_pipeline["candidate"]
    bound = bec_small_pipeline["bound"]
    cand.write(tmp_path / "c.csv", tmp_path / "c.json")
    code, out, _ = run(
        capsys,
        "constants",
        "--mu", f"{bound.mu.numerator}/{bound.mu.denominator}",
        "--sup-ratio", f"{bound.sup_bound.numerator}/{bound.sup_bound.denominator}",
        "--candidate-csv", str(tmp_path / "c.csv"),
        "--candidate-json", str(tmp_path / "c.json"),
    )
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"mu", "rho1", "alpha", "delta", "c3", "eps1", "eps2", "rho", "c2", "beta1"}


def test_decimal_snap_warning(capsys):
    code, out, err = run(capsys, "enumerate", "--z", "0.5", "--n", "1")
    assert code == 0
    assert "snapping decimal" in err
