"""Command line entry point: ``fecg-anc {extract,batch,detect,report,fetch}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


from .errors import AncError
from .metrics import detection_report, match_peaks, mse_curve, snr_db
from .pipeline import (BATCH_ALGORITHMS, PipelineConfig, load_config, read_trace,
                       run_batch, run_pipeline)
from .qrs import format_peaks, heart_rate, pan_tompkins, parse_peaks, preset
from .recording import DAISY_URL, fetch_dataset, read_recording


def _run_args(p):
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--input", help="ASCII recording")
    p.add_argument("--desired", type=int, help="1-based desired (abdominal) channel")
    p.add_argument("--reference", type=int, help="1-based reference (thoracic) channel")
    p.add_argument("--annotation", help="reference fetal peak file")
    p.add_argument("--output-dir", help="artifact directory")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key (repeatable)")
    p.add_argument("--no-plots", action="store_true", help="skip SVG output")


def _config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    pairs = {}
    for item in args.set:
        if "=" not in item:
            raise SystemExit(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        pairs[k] = v
    for key, attr in (("input", "input"), ("desired_channel", "desired"),
                      ("reference_channel", "reference"), ("annotation", "annotation"),
                      ("output_dir", "output_dir"), ("algorithm", "algorithm")):
        v = getattr(args, attr, None)
        if v is not None:
            pairs[key] = v
    return cfg.update(pairs)


def cmd_extract(args):
    art = run_pipeline(_config(args), plots=not args.no_plots)
    for notice in art.notices:
        print(f"notice: {notice}", file=sys.stderr)
    print(art.paths["report"].read_text(), end="")


def cmd_batch(args):
    algs = tuple(a.strip() for a in args.algorithms.split(","))
    art = run_batch(_config(args), algs, plots=not args.no_plots)
    for notice in art.notices:
        print(f"notice: {notice}", file=sys.stderr)
    print(art.paths["ranking"].read_text(), end="")


def _signal(args):
    path = Path(args.input)
    if args.channel is not None:
        rec = read_recording(path, args.fs)
        return rec.data[:, args.channel - 1]
    return read_trace(path)


def cmd_detect(args):
    x = _signal(args)
    peaks = pan_tompkins(x, preset(args.preset), fs=args.fs)
    header = f"R peaks from {Path(args.input).name}\npreset={args.preset} fs={args.fs:g}"
    if args.note:
        header += "\n" + args.note
    text = format_peaks(peaks, header)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_report(args):
    e = read_trace(args.fecg)
    lines = [f"n_samples={len(e)}", f"final_mse={mse_curve(e)[-1]:.9g}"]
    b = min(args.burn_in, len(e) - 1)
    if args.output_trace:
        y = read_trace(args.output_trace)
        lines.append(f"snr_db={snr_db(e[b:], y[b:]):.6f}")
    peaks = pan_tompkins(e, preset(args.preset), fs=args.fs)
    lines.append(f"n_peaks={len(peaks)}")
    if len(peaks) >= 2:
        lines.append(f"heart_rate_bpm={heart_rate(peaks):.2f}")
    if args.annotation:
        ref, _ = parse_peaks(Path(args.annotation).read_text(), args.fs)
        rep = detection_report(match_peaks(ref, peaks, args.tol_ms))
        for k, v in rep.as_dict().items():
            lines.append(f"{k}={'absent' if v is None else (f'{v:.6f}' if isinstance(v, float) else v)}")
    print("\n".join(lines))


def cmd_fetch(args):
    path = fetch_dataset(args.dest, args.url, timeout=args.timeout)
    print(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fecg-anc",
                                     description="Fetal ECG extraction with combined adaptive filters")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="run one algorithm and write all artifacts")
    _run_args(p)
    p.add_argument("--algorithm", help="lms, nlms, rls, clms, crls or rls-lms")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("batch", help="compare several algorithms and rank by SNR")
    _run_args(p)
    p.add_argument("--algorithms", default=",".join(BATCH_ALGORITHMS))
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("detect", help="Pan-Tompkins R peaks of a CSV trace or recording channel")
    p.add_argument("input")
    p.add_argument("--channel", type=int, help="treat input as a recording; 1-based channel")
    p.add_argument("--fs", type=float, default=250.0)
    p.add_argument("--preset", default="fetal", choices=["fetal", "maternal"])
    p.add_argument("--note", help="extra header line, e.g. provenance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("report", help="recompute metrics from traces and an annotation")
    p.add_argument("--fecg", required=True, help="residual trace CSV")
    p.add_argument("--output-trace", help="filter-output trace CSV, enables SNR")
    p.add_argument("--annotation")
    p.add_argument("--fs", type=float, default=250.0)
    p.add_argument("--burn-in", type=int, default=25)
    p.add_argument("--preset", default="fetal", choices=["fetal", "maternal"])
    p.add_argument("--tol-ms", type=float, default=50.0)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fetch", help="download the DaISy foetal ECG record")
    p.add_argument("--url", default=DAISY_URL)
    p.add_argument("--dest", default="foetal_ecg.dat")
    p.add_argument("--timeout", type=float, default=30.0)
    p.set_defaults(func=cmd_fetch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (AncError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
