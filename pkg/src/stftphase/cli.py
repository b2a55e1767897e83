"""Command-line experiment runner.

Subcommands reproduce the reference analyses (table1, fig2, fig3,
tone-experiment, alpha-sweep, quant-experiment) and expose the pipeline on
user WAV files (analyze, perturb).  Outputs are CSV (UTF-8, comma, header
row), binary PGM rasters (P5, maxval 255), and 16-bit PCM WAV.  Every
command is deterministic given its flags and seeds.  Angle columns in value
tables are in units of pi.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import experiments as exp
from .errors import StftPhaseError
from .histograms import (
    render_per_frequency_image,
    render_per_magnitude_image,
    write_per_frequency_csv,
    write_per_magnitude_csv,
    write_pgm,
)
from .quantize import run_band_quantization_experiment
from .signals import CorpusKind, CorpusSpec, make_corpus
from .stft import StftConfig, StftFrameGrid, stft, stft_of_frames
from .wavio import read_wav, write_wav_pcm16
from .windows import WindowMode, WindowSpec


def _fmt(x: float) -> str:
    return f"{float(x):.9g}"


def _write_csv(path: Path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(rows)


def _ensure_out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _window_from_args(args) -> WindowSpec:
    return WindowSpec(alpha=args.alpha, length=args.n, mode=WindowMode(args.window_mode))


def _parse_cells(text: str) -> list[int]:
    if "-" in text:
        lo, hi = text.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(c) for c in text.split(",")]


def cmd_table1(args) -> int:
    out = _ensure_out_dir(args)
    results = exp.table1_results()
    rows = [
        [
            "example",
            "omega_k_over_pi",
            "omega_t_over_pi",
            "delta_minus_over_pi",
            "n",
            "ratio",
            "zeta_gap_over_pi",
            "reference_ratio",
            "reference_zeta_gap_over_pi",
            "published_zeta_gap_over_pi",
        ]
    ]
    ok = True
    for res in results:
        row = res.row
        rows.append(
            [
                row.label,
                _fmt(row.omega_k / np.pi),
                _fmt(row.omega_t / np.pi),
                _fmt((row.omega_t - row.omega_k) / np.pi),
                str(row.n),
                _fmt(res.ratio),
                _fmt(res.angle_pi),
                _fmt(row.reference_ratio),
                _fmt(row.reference_angle_pi),
                _fmt(row.published_angle_pi),
            ]
        )
        status = "ok" if res.matches_reference else "DEVIATES"
        ok = ok and res.matches_reference
        note = f"  [{row.note}]" if row.note else ""
        print(
            f"example {row.label}: ratio {res.ratio:.4f} (ref {row.reference_ratio}),"
            f" zeta gap {res.angle_pi:.4f}*pi (ref {row.reference_angle_pi}*pi) {status}{note}"
        )
    _write_csv(out / "table1.csv", rows)
    print(f"wrote {out / 'table1.csv'}")
    return 0 if ok else 1


def cmd_fig2(args) -> int:
    out = _ensure_out_dir(args)
    sweep = exp.fig2_sweep(n=args.n, grid_points=args.grid_points)
    for k, ratio, gap in exp.fig2_on_bin_anchors(n=args.n):
        if abs(ratio - 1.0) > 1e-6 or abs(gap - np.pi / 2) > 1e-6:
            print(f"on-bin anchor failed at k={k}: ratio={ratio}, gap={gap}", file=sys.stderr)
            return 1
    header = ["omega_t_over_pi"]
    for k in sweep.ks:
        header += [f"ratio_k{k}", f"zeta_gap_over_pi_k{k}"]
    rows = [header]
    for g in range(len(sweep.omega_t)):
        row = [_fmt(sweep.omega_t[g] / np.pi)]
        for col in range(len(list(sweep.ks))):
            row += [_fmt(sweep.ratio[g, col]), _fmt(sweep.angle_pi[g, col])]
        rows.append(row)
    _write_csv(out / "fig2.csv", rows)
    print(f"on-bin anchors hold for k=1..{args.n // 2 - 1}; wrote {out / 'fig2.csv'}")
    return 0


def cmd_fig3(args) -> int:
    out = _ensure_out_dir(args)
    curves = exp.fig3_curves(theta_points=args.grid_points)
    rows = [["theta_over_pi"] + [f"phi_over_pi_ex{lbl}" for lbl in curves.labels]]
    for g in range(len(curves.theta)):
        rows.append(
            [_fmt(curves.theta[g] / np.pi)] + [_fmt(curves.phi[r, g] / np.pi) for r in range(len(curves.labels))]
        )
    _write_csv(out / "fig3.csv", rows)
    print(f"wrote {out / 'fig3.csv'}")
    return 0


def cmd_tone_experiment(args) -> int:
    out = _ensure_out_dir(args)
    result = exp.tone_experiment(
        count=args.count,
        n=args.n,
        alpha=args.alpha,
        mode=WindowMode(args.window_mode),
        seed=args.seed,
        bin_count=args.phase_bins,
    )
    write_pgm(
        out / "tone_perfreq.pgm",
        render_per_frequency_image(result.hist_set),
        comment="per-frequency phase histograms, per-column normalized",
    )
    rows = [
        [
            "k",
            "fraction_below",
            "side",
            "predicted_cells",
            "argmax_cell",
            "within_one_cell",
        ]
    ]
    for r in result.peak_rows:
        rows.append(
            [
                str(r.k),
                _fmt(r.fraction_below),
                r.side or "",
                ";".join(str(c) for c in r.predicted_cells),
                str(r.argmax_cell),
                "" if r.within_one_cell is None else str(int(r.within_one_cell)),
            ]
        )
    _write_csv(out / "tone_peaks.csv", rows)
    checked = result.checked_rows
    hits = sum(1 for r in checked if r.within_one_cell)
    print(
        f"{len(checked)} dominated bins, {hits} argmaxes within one cell of the"
        f" predicted peaks; wrote {out / 'tone_perfreq.pgm'} and {out / 'tone_peaks.csv'}"
    )
    return 0 if hits == len(checked) else 1


def cmd_alpha_sweep(args) -> int:
    out = _ensure_out_dir(args)
    if args.wav:
        frames, _ = _frames_from_wavs(
            args.wav, args.n, args.stride or args.n // 2, args.window_mode
        )
        rows = exp.alpha_sweep(
            frames, args.n, tracked_bins=args.track, bin_count=args.phase_bins
        )
    else:
        corpus = exp.default_trend_corpus(count=args.count, n=args.n, seed=args.seed)
        rows = exp.alpha_sweep(
            corpus, args.n, tracked_bins=args.track, bin_count=args.phase_bins
        )
    header = ["alpha", "suppression_db"] + [f"ubar_k{k}" for k in args.track]
    table = [header]
    for r in rows:
        table.append([_fmt(r.alpha), _fmt(r.suppression_db)] + [_fmt(u) for u in r.ubar_by_bin])
        print(
            f"alpha={r.alpha:4.2f}: suppression {r.suppression_db:8.2f} dB,"
            f" mean ubar {np.mean(r.ubar_by_bin):.4f}"
        )
    _write_csv(out / "alpha_sweep.csv", table)
    print(
        "suppression = mean transform magnitude over a one-bin band at pi/2 offset,"
        " dB re the zero-frequency peak"
    )
    print(f"wrote {out / 'alpha_sweep.csv'}")
    return 0


def _frames_from_wavs(paths, n, stride, window_mode):
    """Windowless frame matrices concatenated across files (rate of first file)."""
    frames = []
    rate = None
    errors = 0
    for p in paths:
        try:
            buf = read_wav(p)
        except (OSError, StftPhaseError) as err:
            print(f"skipping {p}: {err}", file=sys.stderr)
            errors += 1
            continue
        if rate is None:
            rate = buf.sample_rate
        elif rate != buf.sample_rate:
            print(f"skipping {p}: sample rate {buf.sample_rate} != {rate}", file=sys.stderr)
            errors += 1
            continue
        samples = buf.samples
        if len(samples) < n:
            print(f"skipping {p}: shorter than one frame", file=sys.stderr)
            errors += 1
            continue
        starts = np.arange(0, len(samples) - n + 1, stride)
        frames.append(samples[starts[:, None] + np.arange(n)[None, :]])
    if not frames:
        raise StftPhaseError("no readable input files")
    return np.concatenate(frames, axis=0), rate


def cmd_analyze(args) -> int:
    out = _ensure_out_dir(args)
    window = _window_from_args(args)
    failures = 0
    for path in args.wav:
        try:
            buf = read_wav(path)
            config = StftConfig(window=window, stride=args.stride or window.length // 2)
            grid = stft(buf.samples, config)
            result = exp.analyze_grid(grid, bin_count=args.phase_bins, bands=args.mag_bands)
        except (OSError, StftPhaseError) as err:
            print(f"error analyzing {path}: {err}", file=sys.stderr)
            failures += 1
            continue
        stem = Path(path).stem
        write_pgm(
            out / f"{stem}_perfreq.pgm",
            render_per_frequency_image(result.per_frequency),
            comment="per-frequency phase histograms, per-column normalized",
        )
        write_pgm(
            out / f"{stem}_permag.pgm",
            render_per_magnitude_image(result.per_magnitude),
            comment="per-magnitude phase histograms, per-band normalized",
        )
        write_per_frequency_csv(out / f"{stem}_perfreq.csv", result.per_frequency)
        write_per_magnitude_csv(out / f"{stem}_permag.csv", result.per_magnitude)
        ubar_rows = [["k", "freq_hz", "ubar", "excluded"]]
        for k in result.per_frequency.ks:
            ubar_rows.append(
                [
                    str(k),
                    _fmt(k * buf.sample_rate / grid.n),
                    _fmt(result.ubar_by_bin[k - 1]),
                    str(result.per_frequency.histogram_for(k).excluded),
                ]
            )
        _write_csv(out / f"{stem}_ubar.csv", ubar_rows)
        top = np.argsort(result.ubar_by_bin)[::-1][:10]
        print(f"{path}: top-10 nonuniform bins (k, ubar):")
        for idx in top:
            print(f"  k={idx + 1:4d}  ubar={result.ubar_by_bin[idx]:.4f}")
    return 1 if failures == len(args.wav) else 0


def cmd_quant_experiment(args) -> int:
    out = _ensure_out_dir(args)
    if args.wav:
        frames, rate = _frames_from_wavs(args.wav, args.n, args.stride or args.n // 2, args.window_mode)
        window = _window_from_args(args)
        grid = stft_of_frames(frames, window)
    else:
        spec = CorpusSpec(kind=CorpusKind.RANDOM_TONES, count=args.count, n=args.n, seed=args.seed)
        grid = stft_of_frames(make_corpus(spec), _window_from_args(args))
        rate = args.sample_rate
    holdout = None
    if args.holdout:
        half = grid.frame_count // 2
        holdout = StftFrameGrid(coefficients=grid.coefficients[half:], config=grid.config)
        grid = StftFrameGrid(coefficients=grid.coefficients[:half], config=grid.config)
    report = run_band_quantization_experiment(
        grid, rate, cells_range=_parse_cells(args.cells), holdout_grid=holdout
    )
    print(report.to_text())
    _write_csv(out / "quant_report.csv", report.csv_rows())
    (out / "quant_report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
    print(f"wrote {out / 'quant_report.csv'} and {out / 'quant_report.txt'}")
    return 0


def cmd_perturb(args) -> int:
    buf = read_wav(args.input)
    rebuilt, bin_hz = exp.perturb_pipeline(
        buf.samples,
        buf.sample_rate,
        bin_index=args.bin,
        halfwidth=args.halfwidth,
        seed=args.seed,
        n=args.n,
        alpha=args.alpha,
        mode=WindowMode(args.window_mode),
    )
    write_wav_pcm16(args.output, rebuilt, buf.sample_rate)
    print(f"perturbed bin {args.bin} ({bin_hz:.9g} Hz) -> {args.output}")
    return 0


def _add_common(parser, *, n=512, alpha=0.46, seed=1234) -> None:
    parser.add_argument("--n", type=int, default=n, help="frame length in samples")
    parser.add_argument("--stride", type=int, default=0, help="hop size (default n/2)")
    parser.add_argument("--alpha", type=float, default=alpha, help="window shape in [0, 0.5]")
    parser.add_argument(
        "--window-mode",
        choices=[m.value for m in WindowMode],
        default=WindowMode.PERIODIC.value,
    )
    parser.add_argument("--phase-bins", type=int, default=64, help="phase histogram cells")
    parser.add_argument("--mag-bands", type=int, default=16, help="magnitude bands")
    parser.add_argument("--seed", type=int, default=seed)
    parser.add_argument("--out-dir", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stftphase",
        description="STFT coefficient phase distribution analysis and quantization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="phase histograms and nonuniformity for WAV files")
    p.add_argument("wav", nargs="+", help="input WAV paths")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table1", help="five-condition decomposition regression table")
    _add_common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("fig2", help="ratio and zeta-gap sweeps versus tone frequency")
    _add_common(p, n=16)
    p.add_argument("--grid-points", type=int, default=2048)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", help="coefficient phase versus tone phase curves")
    _add_common(p)
    p.add_argument("--grid-points", type=int, default=1024)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("tone-experiment", help="random-tone Monte Carlo peak check")
    _add_common(p, alpha=0.0, seed=20240)
    p.add_argument("--count", type=int, default=10_000, help="number of tones")
    p.set_defaults(func=cmd_tone_experiment)

    p = sub.add_parser("alpha-sweep", help="nonuniformity and suppression versus window shape")
    p.add_argument("wav", nargs="*", help="optional WAV paths (default: synthetic corpus)")
    _add_common(p, seed=2024)
    p.add_argument("--count", type=int, default=4000, help="synthetic corpus frames")
    p.add_argument(
        "--track",
        type=int,
        nargs="+",
        default=list(exp.DEFAULT_TRACKED_BINS),
        help="bins to report ubar for",
    )
    p.set_defaults(func=cmd_alpha_sweep)

    p = sub.add_parser("quant-experiment", help="URQ versus PDF-optimized phase quantizers")
    p.add_argument("wav", nargs="*", help="optional WAV paths (default: tone corpus)")
    _add_common(p, alpha=0.46, seed=1234)
    p.add_argument("--cells", default="2-8", help="cell counts, e.g. 2-8 or 2,4,8")
    p.add_argument("--count", type=int, default=10_000, help="synthetic corpus frames")
    p.add_argument("--sample-rate", type=float, default=44100.0, help="nominal rate for synthetic corpora")
    p.add_argument(
        "--holdout",
        action="store_true",
        help="train on the first half of the frames, evaluate on the second",
    )
    p.set_defaults(func=cmd_quant_experiment)

    p = sub.add_parser("perturb", help="add phase noise to one bin and reconstruct")
    p.add_argument("input", help="input WAV")
    p.add_argument("output", help="output WAV")
    p.add_argument("--bin", type=int, required=True, help="bin index k in 1..n/2-1")
    p.add_argument("--halfwidth", type=float, default=np.pi / 4, help="noise half-width, radians")
    _add_common(p, alpha=0.5)
    p.set_defaults(func=cmd_perturb)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, StftPhaseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
