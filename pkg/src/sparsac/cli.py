"""Command-line front end: denoise signal files, run batch experiments,
fabricate test data, and evaluate the closed-form predictions.

Exit codes: 0 on success, 1 on usage or parse errors, 2 when a denoise run
finished without reaching the consensus threshold.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from . import figures, sigio
from .experiment import ExperimentScenario, run_scenario, synthesize
from .metrics import (
    classic_ransac_trials,
    clean_subset_probability,
    predicted_snr_out,
    snr_improvement_over_subset,
)
from .ransac import (
    RansacConfig,
    default_consensus_threshold,
    default_inlier_bound,
    ransac_denoise,
    robust_sigma,
)
from .simulate import RANSAC_STREAM, stream_rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONSENSUS = 2


class _Parser(argparse.ArgumentParser):
    # Usage problems exit 1; argparse's default of 2 is reserved for the
    # consensus-not-reached outcome.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _auto_float(text: str) -> float | None:
    if text.strip().lower() == "auto":
        return None
    return float(text)


def _auto_int(text: str) -> int | None:
    if text.strip().lower() == "auto":
        return None
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sparsac",
                     description="Consensus denoising for DFT-sparse signals")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("denoise", help="denoise a signal CSV file")
    p.add_argument("input", type=Path, help="signal CSV (index,re,im)")
    p.add_argument("--k", type=int, required=True, help="spectrum sparsity")
    p.add_argument("--m", type=int, default=None,
                   help="subset size (default: min(N, 5K))")
    p.add_argument("--d", type=_auto_float, default=None, metavar="D|auto",
                   help="inlier bound (default: auto)")
    p.add_argument("--t", type=_auto_int, default=None, metavar="T|auto",
                   help="consensus threshold (default: ceil(3N/4))")
    p.add_argument("--nmax", type=int, default=100_000, help="trial budget")
    p.add_argument("--sigma", type=float, default=None,
                   help="known noise deviation (complex convention); used for --d auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", type=Path, default=None,
                   help="denoised signal path (default: <input>.denoised.csv)")
    p.add_argument("--plot", action="store_true",
                   help="render a reconstruction overlay PNG next to the output")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("experiment", help="run a seeded Monte-Carlo experiment")
    _add_scenario_flags(p)
    p.add_argument("--scenario", type=Path, default=None,
                   help="key=value scenario file; flags override its entries")
    p.add_argument("-o", "--outdir", type=Path, default=Path("."),
                   help="directory for the run table (and plots)")
    p.add_argument("--prefix", default="runs", help="output file stem")
    p.add_argument("--emit-plot", action="store_true",
                   help="also write per-run scatter CSVs and render figures")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("generate", help="fabricate a noisy sparse signal file")
    _add_scenario_flags(p, runs=False)
    p.add_argument("-o", "--output", type=Path, required=True, help="signal CSV path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("predict", help="evaluate the closed-form predictions")
    p.add_argument("m", type=int, help="subset size M")
    p.add_argument("n", type=int, help="signal length N")
    p.add_argument("i", type=int, help="outlier count I")
    p.add_argument("--confidence", type=float, default=0.99,
                   help="success probability for the classic trial formula")
    p.add_argument("--consensus", type=float, default=None, metavar="D",
                   help="consensus size for the SNR-gain formulas")
    p.add_argument("--sparsity", type=int, default=None, metavar="K",
                   help="sparsity for the SNR-gain formulas")
    p.set_defaults(func=cmd_predict)

    return parser


# Sentinel distinguishing "flag not given" from "--d auto" (which maps to
# None). Must not be a string: argparse runs string defaults through type=.
_UNSET = object()

_SCENARIO_FLAGS = ("n", "k", "m", "i", "sigma", "offset_real", "offset_imag",
                   "seed", "amp_low", "amp_high", "d", "t", "nmax", "runs")


def _add_scenario_flags(p: argparse.ArgumentParser, runs: bool = True) -> None:
    p.add_argument("--n", type=int, default=_UNSET, help="signal length")
    p.add_argument("--k", type=int, default=_UNSET, help="sparsity")
    p.add_argument("--m", type=int, default=_UNSET, help="subset size")
    p.add_argument("--i", type=int, default=_UNSET, help="outlier count")
    p.add_argument("--sigma", type=float, default=_UNSET,
                   help="noise deviation (complex convention)")
    p.add_argument("--offset-real", type=float, default=_UNSET)
    p.add_argument("--offset-imag", type=float, default=_UNSET)
    p.add_argument("--seed", type=int, default=_UNSET, help="master seed")
    p.add_argument("--amp-low", type=float, default=_UNSET)
    p.add_argument("--amp-high", type=float, default=_UNSET)
    if runs:
        p.add_argument("--d", type=_auto_float, default=_UNSET,
                       metavar="D|auto", help="inlier bound (default: auto)")
        p.add_argument("--t", type=_auto_int, default=_UNSET,
                       metavar="T|auto", help="consensus threshold")
        p.add_argument("--nmax", type=int, default=_UNSET, help="trial budget")
        p.add_argument("--runs", type=int, default=_UNSET, help="realization count")


SCENARIO_KEYS = {
    "n": int, "k": int, "m": int, "i": int, "sigma": float,
    "offset_real": float, "offset_imag": float, "d": _auto_float,
    "t": _auto_int, "nmax": int, "runs": int, "seed": int,
    "amp_low": float, "amp_high": float,
}


def read_scenario_file(path) -> dict:
    """Flat key=value scenario text; '#' starts a comment."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{line_number}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            if key not in SCENARIO_KEYS:
                raise ValueError(f"{path}:{line_number}: unknown scenario key {key!r}")
            values[key] = SCENARIO_KEYS[key](value.strip())
    return values


def _build_scenario(args, file_values: dict | None = None) -> ExperimentScenario:
    merged = dict(file_values or {})
    for key in _SCENARIO_FLAGS:
        value = getattr(args, key, _UNSET)
        if value is not _UNSET:
            merged[key] = value
    defaults = ExperimentScenario()
    offset = complex(merged.pop("offset_real", 0.0), merged.pop("offset_imag", 0.0))
    amplitude_range = (merged.pop("amp_low", 1.0), merged.pop("amp_high", 1.0))
    return ExperimentScenario(
        n=merged.get("n", defaults.n),
        k=merged.get("k", defaults.k),
        m=merged.get("m", defaults.m),
        i=merged.get("i", defaults.i),
        sigma=merged.get("sigma", defaults.sigma),
        offset=offset,
        d=merged.get("d", defaults.d),
        t=merged.get("t", defaults.t),
        nmax=merged.get("nmax", defaults.nmax),
        runs=merged.get("runs", defaults.runs),
        seed=merged.get("seed", defaults.seed),
        amplitude_range=amplitude_range,
    )


def cmd_denoise(args) -> int:
    try:
        noisy = sigio.read_signal(args.input)
    except (OSError, sigio.SignalFormatError) as exc:
        print(f"sparsac denoise: {exc}", file=sys.stderr)
        return EXIT_USAGE
    n = noisy.size
    m = args.m if args.m is not None else min(n, 5 * args.k)
    if args.d is not None:
        bound = args.d
    elif args.sigma is not None:
        bound = default_inlier_bound(args.sigma / math.sqrt(2.0))
    else:
        bound = default_inlier_bound(robust_sigma(noisy).combined_sigma)
    threshold = args.t if args.t is not None else default_consensus_threshold(n)
    cfg = RansacConfig(subset_size=m, inlier_bound=bound, consensus_threshold=threshold,
                       max_trials=args.nmax, sparsity=args.k, rng_seed=args.seed)
    try:
        cfg.validate(n)
    except ValueError as exc:
        print(f"sparsac denoise: {exc}", file=sys.stderr)
        return EXIT_USAGE
    outcome = ransac_denoise(noisy, cfg, rng=stream_rng(args.seed, RANSAC_STREAM))

    out = args.output if args.output is not None else args.input.with_suffix(".denoised.csv")
    mask_path = out.with_suffix(".mask.csv")
    report_path = out.with_suffix(".report.txt")
    sigio.write_signal(out, outcome.reconstructed)
    sigio.write_mask(mask_path, outcome.consensus, n)
    report = "\n".join([
        f"samples: {n}",
        f"sparsity: {cfg.sparsity}",
        f"subset size: {cfg.subset_size}",
        f"inlier bound: {bound:.6g}",
        f"consensus threshold: {threshold}",
        f"trials: {outcome.trials_used}",
        f"consensus size: {len(outcome.consensus)}",
        f"reached consensus: {'yes' if outcome.reached_consensus else 'no'}",
        f"passthrough: {'yes' if outcome.passthrough else 'no'}",
    ]) + "\n"
    report_path.write_text(report, encoding="utf-8")
    print(report, end="")
    print(f"wrote {out}, {mask_path}, {report_path}")
    if args.plot:
        overlay = figures.save_reconstruction_overlay(
            noisy, outcome.reconstructed, out.with_suffix(".png"))
        print(f"wrote {overlay}")
    if not outcome.reached_consensus:
        print("warning: consensus threshold was not reached", file=sys.stderr)
        return EXIT_NO_CONSENSUS
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        file_values = read_scenario_file(args.scenario) if args.scenario else None
        scenario = _build_scenario(args, file_values)
    except (OSError, ValueError) as exc:
        print(f"sparsac experiment: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = run_scenario(scenario)

    args.outdir.mkdir(parents=True, exist_ok=True)
    table = args.outdir / f"{args.prefix}.csv"
    sigio.write_run_table(table, result)
    summary = result.summary_row()
    print("      N_it    SNR_in   SNR_in0  SNR_out0   SNR_out         D")
    print("avg " + "  ".join(f"{float(v):8.2f}" for v in summary[1:7]))
    print(f"wrote {table}")

    if args.emit_plot:
        written = _emit_plot_data(result, args.outdir, args.prefix)
        written.append(figures.save_trial_counts(result, args.outdir / f"{args.prefix}_nit.png"))
        written.append(figures.save_consensus_sizes(result, args.outdir / f"{args.prefix}_d.png"))
        written.append(figures.save_snr_scatter(result, args.outdir / f"{args.prefix}_snr.png"))
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def _emit_plot_data(result, outdir: Path, prefix: str) -> list[Path]:
    """Plot-ready scatter columns: run index against trials, D, and SNRs."""
    paths = []
    specs = [
        (f"{prefix}_nit.csv", ["run", "N_it"], lambda r: [r.run_index, r.n_trials]),
        (f"{prefix}_d.csv", ["run", "D"], lambda r: [r.run_index, r.consensus_size]),
        (f"{prefix}_snr.csv", ["run", "SNR_in", "SNR_in0", "SNR_out0", "SNR_out"],
         lambda r: [r.run_index, r.snr_in, r.snr_in0, r.snr_out0, r.snr_out]),
    ]
    for name, header, extract in specs:
        path = outdir / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for record in result.records:
                writer.writerow([repr(float(c)) if isinstance(c, float) else c
                                 for c in extract(record)])
        paths.append(path)
    return paths


def cmd_generate(args) -> int:
    scenario = _build_scenario(args)
    realization = synthesize(scenario, run_index=0)
    try:
        sigio.write_signal(args.output, realization.noisy)
        sidecar = args.output.with_suffix(".sidecar.csv")
        sigio.write_sidecar(sidecar, realization.truth, realization.outlier_positions,
                            realization.impulses[realization.outlier_positions])
    except OSError as exc:
        print(f"sparsac generate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {args.output} and {sidecar}")
    return EXIT_OK


def cmd_predict(args) -> int:
    m, n, i = args.m, args.n, args.i
    try:
        p = clean_subset_probability(m, n, i)
    except ValueError as exc:
        print(f"sparsac predict: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"P(M={m}, N={n}, I={i}) = {p:.6g}")
    if p == 0.0:
        print(f"infeasible: M={m} exceeds the {n - i} available inliers; "
              "no outlier-free subset exists")
        return EXIT_OK
    print(f"expected trials 1/P = {1.0 / p:.4f}")
    if i > 0:
        classic = classic_ransac_trials(m, n, i, args.confidence)
        print(f"classic approximation at confidence {args.confidence:g}: "
              f"{classic:.4f} trials")
        print("  (assumes (N-I-M)/(N-M) ~ (N-I)/N; the exact product above "
              "is authoritative otherwise)")
    if args.consensus is not None and args.sparsity is not None:
        d, k = args.consensus, args.sparsity
        print(f"SNR gain of consensus fit over impulse-free input: "
              f"{predicted_snr_out(0.0, d, k):.4f} dB (10 log10(D/K))")
        print(f"SNR gain of subset fit over impulse-free input:    "
              f"{predicted_snr_out(0.0, m, k):.4f} dB (10 log10(M/K))")
        print(f"consensus improvement over subset stage:           "
              f"{snr_improvement_over_subset(d, m):.4f} dB (10 log10(D/M))")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
