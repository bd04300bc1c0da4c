"""Command-line interface: every computation as a batch subcommand.

Conventions: rationals are written num/den on the command line (plain
decimals are accepted and snapped to their exact decimal value with a
warning); data goes to files or stdout, progress chatter to stderr; exact
quantities are rendered both as fractions and decimals.  Exit codes: 0
success, 1 computation failure (e.g. certification did not produce a mu, or
a verification found violations), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import channel, floors, kernels
from .candidate import CandidateFunction, build_candidate
from .certify import certify
from .constants import chain_constants
from .iteration import IterationConfig, iterate
from .presets import PRESETS
from .simulate import SimConfig, simulate as run_simulation
from .tradeoff import tradeoff_point
from .transcript import verify_transcript

__all__ = ["main"]


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def parse_rational(text: str) -> Fraction:
    """num/den, an integer, or a decimal (snapped to its exact decimal value)."""
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    if any(c in text for c in ".eE"):
        _warn(f"snapping decimal {text!r} to the exact rational {Fraction(text)}")
    return Fraction(text)


def _dual(fr: Fraction, digits: int = 6) -> str:
    return f"{fr.numerator}/{fr.denominator} (~{float(fr):.{digits}f})"


def _outpath(name: str | None) -> Path | None:
    if name is None:
        return None
    p = Path(name)
    if not p.is_absolute():
        p = Path(os.environ.get("POLARSCALE_OUTDIR", ".")) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise SystemExit(2)
    if step <= 0 or stop < start:
        print("error: grid must be start:stop:step with positive step", file=sys.stderr)
        raise SystemExit(2)
    out = []
    v = start
    while v <= stop + 1e-12:
        out.append(round(v, 12))
        v += step
    return out


def _plot_xy(path: Path, x, y, xlabel: str, ylabel: str, logy: bool = False) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, y, lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, format="svg")


# --- subcommands ---------------------------------------------------------------


def _cmd_enumerate(args) -> int:
    path = _outpath(args.out)
    if path is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(["index", "bits", "z_exact_num", "z_exact_den", "z_float"])
        for idx, p, q in channel.iter_synthetic_bec(args.z, args.n):
            bits = format(idx - 1, f"0{args.n}b") if args.n else ""
            writer.writerow([idx, bits, p, q, repr(p / q)])
    else:
        channel.write_synthetic_csv(path, args.z, args.n)
        print(f"wrote {path}")
    return 0


def _resolve_preset(args):
    """Accept either a full preset name or paper/desk composed with --operator."""
    name = args.preset
    if name in ("paper", "desk"):
        name = f"{name}-{args.operator}"
    return PRESETS[name]


def _iteration_config(args) -> IterationConfig:
    if args.preset:
        preset = _resolve_preset(args)
        return IterationConfig(
            ns=preset.ns,
            ms=preset.ms,
            k=preset.k,
            init_exponent=preset.init_exponent,
            operator=preset.operator,
            backend=args.backend,
            threads=args.threads,
        )
    return IterationConfig(
        ns=args.ns,
        ms=args.ms,
        k=args.k,
        init_exponent=args.init_exponent,
        operator=args.operator,
        backend=args.backend,
        threads=args.threads,
    )


def _cmd_iterate(args) -> int:
    cfg = _iteration_config(args)
    _progress(
        f"iterating {cfg.operator} operator: ns={cfg.ns} ms={cfg.ms} k={cfg.k} "
        f"backend={cfg.backend or kernels.default_backend()}"
    )
    result = iterate(cfg)
    rhat_path = _outpath(args.out_rhat)
    if rhat_path is not None:
        with open(rhat_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "rhat"])
            for j, r in enumerate(result.rhat_trace, 1):
                w.writerow([j, repr(r)])
        print(f"wrote {rhat_path}")
    samples_path = _outpath(args.out_samples)
    if samples_path is not None:
        grid = result.h_final.grid
        with open(samples_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "h"])
            for x, h in zip(grid, result.h_final.samples):
                w.writerow([repr(float(x)), repr(float(h))])
        print(f"wrote {samples_path}")
    plot_path = _outpath(args.plot)
    if plot_path is not None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        from .iteration import initial_samples

        h0 = initial_samples(cfg)
        fig, ax = plt.subplots(figsize=(6, 4))
        grid = result.h_final.grid
        stride = max(1, cfg.ns // 200)
        ax.plot(grid[::stride], h0.samples[::stride], "ko", ms=2.5, label="initial")
        ax.plot(grid, result.h_final.samples, "r-", lw=1.2, label=f"after k={cfg.k}")
        ax.set_xlabel("x")
        ax.set_ylabel("h(x)")
        ax.legend()
        ax.grid(True, alpha=0.4)
        fig.tight_layout()
        fig.savefig(plot_path, format="svg")
        print(f"wrote {plot_path}")
    print(f"final rhat = {result.rhat!r}")
    return 0


def _cmd_certify(args) -> int:
    if args.preset:
        preset = _resolve_preset(args)
    else:
        for name in ("ns", "ms", "k", "eta", "m_bar"):
            if getattr(args, name) is None:
                print(f"error: --{name.replace('_', '-')} required without --preset", file=sys.stderr)
                return 2
        from .presets import CertifyPreset

        preset = CertifyPreset(
            operator=args.operator,
            ns=args.ns,
            ms=args.ms,
            k=args.k,
            init_exponent=args.init_exponent,
            eta=args.eta,
            m_bar=args.m_bar,
            delta_s=args.delta_s,
        )
    out_dir = _outpath(args.out_dir or "certify-out")
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg = IterationConfig(
        ns=preset.ns,
        ms=preset.ms,
        k=preset.k,
        init_exponent=preset.init_exponent,
        operator=preset.operator,
        backend=args.backend,
        threads=args.threads,
    )
    _progress(f"iterating ({cfg.operator}, ns={cfg.ns}, ms={cfg.ms}, k={cfg.k})...")
    result = iterate(cfg)
    _progress(f"iteration done, rhat={result.rhat:.6f}; building candidate...")
    cand = build_candidate(result.h_final, preset.eta, preset.m_bar, preset.delta_s)
    cand.write(out_dir / "candidate.csv", out_dir / "candidate.json")
    transcript_path = out_dir / ("transcript.txt.gz" if args.gzip else "transcript.txt")
    bound = certify(
        cand,
        preset.operator,
        bits=args.bits,
        mu_max_den=args.mu_max_den,
        transcript_path=transcript_path,
        progress=_progress,
    )
    summary = {
        "operator": preset.operator,
        "success": bound.success,
        "sup_bound": f"{bound.sup_bound.numerator}/{bound.sup_bound.denominator}",
        "sup_bound_float": float(bound.sup_bound),
        "h0_float": float(bound.h0),
        "h1_float": float(bound.h1),
        "middle_max_float": float(bound.middle_max),
        "mu": None if bound.mu is None else f"{bound.mu.numerator}/{bound.mu.denominator}",
        "mu_float": bound.mu_float,
        "rhat_final": result.rhat,
        "breakpoints": bound.n_breakpoints,
        "transcript": str(transcript_path),
    }
    with open(out_dir / "result.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if bound.success:
        print(f"certified sup ratio <= {_dual(bound.sup_bound)}")
        print(f"certified mu <= {_dual(bound.mu, 4)}")
        print(f"transcript: {transcript_path}")
        return 0
    print(bound.message)
    return 1


def _cmd_verify_transcript(args) -> int:
    checked, failures = verify_transcript(args.path)
    if failures:
        print(f"FAILED: {len(failures)} of {checked} inequalities did not re-verify")
        for lineno, line in failures[:10]:
            print(f"  line {lineno}: {line[:100]}")
        return 1
    print(f"ok: all {checked} inequalities re-verified by integer arithmetic")
    return 0


def _cmd_constants(args) -> int:
    h = None
    if args.candidate_csv and args.candidate_json:
        h = CandidateFunction.load(args.candidate_csv, args.candidate_json)
    chain = chain_constants(
        args.mu, args.sup_ratio, h=h, p_e=float(args.pe), c3=args.c3
    )
    print(json.dumps(chain.as_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_tradeoff(args) -> int:
    mu = float(args.mu)
    rows = []
    for gamma in _grid(args.gamma_grid):
        if not 1 / (1 + mu) < gamma < 1:
            continue
        point = tradeoff_point(gamma, mu)
        rows.append((gamma, point.pe_exponent, point.gap_exponent))
    path = _outpath(args.out)
    target = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(target)
        w.writerow(["gamma", "pe_exponent", "gap_exponent"])
        for row in rows:
            w.writerow([repr(v) for v in row])
    finally:
        if path:
            target.close()
            print(f"wrote {path}")
    return 0


def _cmd_floor_verify(args) -> int:
    if args.mode == "bec":
        report = floors.verify_domination_bec(args.z, args.z_prime, args.n_max)
        bad = report["violations"] or report["undecided"]
        print(
            f"checked {report['checked']} indices (n <= {args.n_max}); "
            f"{len(report['violations'])} violations, {len(report['undecided'])} undecided"
        )
        return 1 if bad else 0
    if args.mode == "corollary":
        k = int(args.rate * (1 << args.n_max))
        code = channel.construct_polar_code(args.z_prime, args.n_max, k)
        report = floors.verify_corollary_bec(code, args.z)
        print(
            f"pe({float(args.z):.4f}) = {float(report['pe_z']):.6g}, "
            f"pe'({float(args.z_prime):.4f}) = {float(report['pe_zp']):.6g}, "
            f"holds = {report['holds']}"
        )
        return 0 if report["holds"] else 1
    report = floors.verify_domination_bmsc_intervals(
        (args.z_lo, args.z_hi), (args.zp_lo, args.zp_hi), args.n_max
    )
    print(
        f"checked {report['checked']} interval indices; "
        f"{len(report['violations'])} violations"
    )
    return 1 if report["violations"] else 0


def _cmd_floor_sweep(args) -> int:
    k = int(args.rate * (1 << args.n))
    code = channel.construct_polar_code(args.design_z, args.n, k)
    zs = [parse_rational(f"{v}") for v in _grid(args.z_grid)]
    zs = [z for z in zs if 0 < z <= code.design_param]
    report = floors.floor_sweep(code, zs)
    path = _outpath(args.out)
    target = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(target)
        w.writerow(["z", "pe_tilde", "log_slope"])
        for z, pe, slope in report.rows():
            w.writerow([repr(float(z)), repr(float(pe)), repr(slope)])
    finally:
        if path:
            target.close()
            print(f"wrote {path}")
    plot_path = _outpath(args.plot)
    if plot_path is not None:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog([float(z) for z in report.z_grid], [float(p) for p in report.pe_tilde], lw=1.2)
        ax.set_xlabel("z")
        ax.set_ylabel("union bound")
        ax.grid(True, which="both", alpha=0.4)
        fig.tight_layout()
        fig.savefig(plot_path, format="svg")
        print(f"wrote {plot_path}")
    print(
        f"min log-log slope {report.min_slope:.4f}; "
        f"reference exponent {report.reference_exponent:.4f}"
    )
    return 0


def _cmd_simulate(args) -> int:
    code = channel.construct_polar_code(args.design_z, args.n, args.k)
    cfg = SimConfig(code=code, z=args.z, trials=args.trials, seed=args.seed)
    result = run_simulation(cfg)
    payload = json.dumps(result.as_dict(), indent=2, sort_keys=True)
    path = _outpath(args.out)
    if path is not None:
        path.write_text(payload + "\n")
        print(f"wrote {path}")
    else:
        print(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarscale",
        description="Certified scaling-exponent bounds and polarization analysis for polar codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exact synthetic-channel profile as CSV")
    p.add_argument("--z", type=parse_rational, required=True, help="erasure probability (num/den)")
    p.add_argument("--n", type=int, required=True, help="polarization depth")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("iterate", help="run the sampled operator iteration")
    p.add_argument("--operator", choices=["bec", "bmsc"], default="bmsc")
    p.add_argument("--preset", choices=sorted(PRESETS) + ["paper", "desk"])
    p.add_argument("--ns", type=int, default=10_000)
    p.add_argument("--ms", type=int, default=1_000)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--init-exponent", type=parse_rational, default=Fraction(3, 4))
    p.add_argument("--out-rhat", help="CSV path for the rhat trace (k,rhat)")
    p.add_argument("--out-samples", help="CSV path for the final samples (x,h)")
    p.add_argument("--plot", help="SVG path for the final function")
    p.add_argument("--backend", choices=kernels.available_backends())
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_iterate)

    p = sub.add_parser("certify", help="iterate, build the candidate, certify mu")
    p.add_argument("--operator", choices=["bec", "bmsc"], default="bmsc")
    p.add_argument("--preset", choices=sorted(PRESETS) + ["paper", "desk"])
    p.add_argument("--ns", type=int)
    p.add_argument("--ms", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--init-exponent", type=parse_rational, default=Fraction(3, 4))
    p.add_argument("--eta", type=parse_rational)
    p.add_argument("--m-bar", type=int)
    p.add_argument("--delta-s", type=parse_rational, default=Fraction(1, 10_000))
    p.add_argument("--bits", type=int, default=128, help="enclosure precision bits")
    p.add_argument("--mu-max-den", type=int, default=1000)
    p.add_argument("--out-dir", help="directory for transcript/candidate/result")
    p.add_argument("--gzip", action="store_true", help="gzip the transcript")
    p.add_argument("--backend", choices=kernels.available_backends())
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("verify-transcript", help="replay a certification transcript")
    p.add_argument("path")
    p.set_defaults(func=_cmd_verify_transcript)

    p = sub.add_parser("constants", help="evaluate the certified constant chain as JSON")
    p.add_argument("--mu", type=parse_rational, required=True)
    p.add_argument("--sup-ratio", type=parse_rational, required=True)
    p.add_argument("--candidate-csv")
    p.add_argument("--candidate-json")
    p.add_argument("--c3", type=float, help="explicit c3 (otherwise from the candidate)")
    p.add_argument("--pe", type=parse_rational, default=Fraction(1, 1000))
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("tradeoff", help="emit the gamma trade-off curve as CSV")
    p.add_argument("--mu", type=parse_rational, required=True)
    p.add_argument("--gamma-grid", default="0.3:0.95:0.05", help="start:stop:step")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.set_defaults(func=_cmd_tradeoff)

    p = sub.add_parser("floor-verify", help="verify the channel-domination inequalities")
    p.add_argument("--mode", choices=["bec", "corollary", "intervals"], default="bec")
    p.add_argument("--z", type=parse_rational, default=Fraction(1, 4))
    p.add_argument("--z-prime", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--rate", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--z-lo", type=parse_rational, default=Fraction(1, 5))
    p.add_argument("--z-hi", type=parse_rational, default=Fraction(1, 5))
    p.add_argument("--zp-lo", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--zp-hi", type=parse_rational, default=Fraction(1, 2))
    p.set_defaults(func=_cmd_floor_verify)

    p = sub.add_parser("floor-sweep", help="union-bound sweep of a fixed code")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--rate", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--design-z", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--z-grid", default="0.05:0.5:0.05")
    p.add_argument("--out", help="output CSV (default stdout)")
    p.add_argument("--plot", help="SVG path for the log-log curve")
    p.set_defaults(func=_cmd_floor_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo SC decoding over the BEC")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--design-z", type=parse_rational, default=Fraction(1, 2))
    p.add_argument("--z", type=parse_rational, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output JSON (default stdout)")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
