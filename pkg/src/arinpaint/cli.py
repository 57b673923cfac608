"""Command-line interface: ``arinpaint {degrade,inpaint,evaluate,sweep,synth}``."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .audio_io import read_mask_file, read_wav, write_mask, write_results, write_wav
from .errors import InpaintingError
from .evaluation import EvalRecord, sdr_inpainted
from .methods import InpaintConfig, Method, Window, inpaint
from .signals import generate_gaps
from .sweep import DEFAULT_ORDERS, GRID_ORDERS, SweepSpec, run_sweep

log = logging.getLogger("arinpaint")


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(v) for v in text.split(",") if v.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
    return parse


def cmd_degrade(args) -> int:
    sig = read_wav(args.input, downmix=args.downmix)
    mask = generate_gaps(len(sig), sig.sample_rate, args.gap_ms, args.count,
                         args.min_separation, args.border, args.seed)
    write_mask(mask, args.mask, sig.sample_rate)
    write_wav(sig.with_samples(sig.samples * mask.reliable()), args.out, args.encoding)
    print(f"{len(mask.gaps)} gaps of {mask.gaps[0].length if mask.gaps else 0} samples "
          f"-> {args.mask}")
    return 0


def _inpaint_config(args, parser) -> InpaintConfig:
    method = Method(args.method)
    if args.window is not None and method is not Method.FRAMEWISE:
        parser.error("--window only applies to --method framewise")
    if args.hop is not None and method is not Method.FRAMEWISE:
        parser.error("--hop only applies to --method framewise")
    if args.fit is not None and method is not Method.GAPWISE:
        parser.error("--fit only applies to --method gapwise")
    win = Window(args.window or "hann")
    order = args.order
    if order is None:
        variant = f"framewise-{win.value}" if method is Method.FRAMEWISE else method.value
        order = DEFAULT_ORDERS[variant]
    return InpaintConfig(method=method, estimator=args.estimator, order=order,
                         context_length=args.context, frame_length=args.frame, window=win,
                         hop=args.hop, max_iterations=args.max_iter, rel_tolerance=args.tol,
                         gapwise_fit=args.fit or "segment")


def cmd_inpaint(args, parser) -> int:
    cfg = _inpaint_config(args, parser)
    sig = read_wav(args.input, downmix=args.downmix)
    mf = read_mask_file(args.mask)
    if mf.signal_length != len(sig):
        raise InpaintingError(f"mask is for {mf.signal_length} samples, signal has {len(sig)}")

    def report(label, dt):
        print(f"{label}: {dt:.3f} s", file=sys.stderr)

    t0 = time.perf_counter()
    out = inpaint(sig, mf.mask, cfg, report)
    print(f"total: {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    write_wav(out, args.out, args.encoding)
    return 0


def cmd_evaluate(args) -> int:
    ref = read_wav(args.reference, downmix=args.downmix)
    est = read_wav(args.estimate, downmix=args.downmix)
    mf = read_mask_file(args.mask)
    mask = mf.mask
    per_gap = sdr_inpainted(ref, est, mask, "per_gap")
    overall = sdr_inpainted(ref, est, mask, "all_gaps") if mask.gaps else float("nan")
    if args.out:
        sid = args.signal_id or Path(args.reference).stem
        recs = [EvalRecord(sid, args.method_label, args.estimator_label, args.order_label,
                           1000.0 * g.length / ref.sample_rate, i, v)
                for i, (g, v) in enumerate(zip(mask.gaps, per_gap))]
        write_results(recs, args.out)
    for i, (g, v) in enumerate(zip(mask.gaps, per_gap)):
        print(f"gap {i}\tstart {g.start}\tlength {g.length}\tsdr_db {v:.4f}")
    print(f"all_gaps\tsdr_db {overall:.4f}")
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        corpus_dir=args.corpus, output_csv=args.out, methods=args.methods,
        estimators=args.estimators, orders=args.orders, gap_lengths_ms=args.gap_lengths,
        windows=args.windows, context_length=args.context, frame_length=args.frame,
        count=args.count, seed=args.seed, min_separation=args.min_separation,
        border=args.border, max_iterations=args.max_iter, rel_tolerance=args.tol,
        masks_dir=args.masks_dir, jobs=args.jobs, record_time=args.record_time)

    def progress(done, total, cell):
        print(f"[{done}/{total}] {cell.signal_id} {cell.variant} {cell.estimator} "
              f"p={cell.order} {cell.gap_length_ms:g} ms", file=sys.stderr)

    recs = run_sweep(spec, progress)
    print(f"{len(recs)} rows -> {spec.output_csv}")
    return 0


def cmd_synth(args) -> int:
    from .corpus import multisine_corpus

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = multisine_corpus(args.count, int(args.seconds * args.rate), args.rate, args.seed)
    for name, sig in corpus.items():
        write_wav(sig, out / f"{name}.wav", "float32")
    print(f"{len(corpus)} signals -> {out}")
    return 0


def _add_inpaint_flags(p):
    p.add_argument("--method", choices=[m.value for m in Method], default="gapwise")
    p.add_argument("--estimator", choices=["lpc", "burg"], default="burg")
    p.add_argument("--order", type=int, default=None,
                   help="AR order (default: 2048 extrapolation/gapwise, "
                        "1024 framewise hann, 512 framewise rect)")
    p.add_argument("--context", type=int, default=4096, help="context samples per side")
    p.add_argument("--frame", type=int, default=4096, help="frame length (framewise)")
    p.add_argument("--window", choices=[w.value for w in Window], default=None,
                   help="analysis window (framewise only, default hann)")
    p.add_argument("--hop", type=int, default=None, help="frame hop (default frame/2)")
    p.add_argument("--fit", choices=["segment", "contexts"], default=None,
                   help="gapwise: refit on the whole segment or on the contexts only")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-6)


def _add_gap_flags(p):
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-separation", type=int, default=8192)
    p.add_argument("--border", type=int, default=4096)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arinpaint", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degrade", help="punch seeded gaps into a WAV file")
    p.add_argument("input")
    p.add_argument("--gap-ms", type=float, required=True)
    _add_gap_flags(p)
    p.add_argument("--out", required=True, help="degraded WAV (zeros in the gaps)")
    p.add_argument("--mask", required=True, help="mask file to write")
    p.add_argument("--encoding", choices=["float32", "pcm16"], default="float32")
    p.add_argument("--downmix", action="store_true")

    p = sub.add_parser("inpaint", help="fill the gaps listed in a mask file")
    p.add_argument("input")
    p.add_argument("--mask", required=True)
    p.add_argument("--out", required=True)
    _add_inpaint_flags(p)
    p.add_argument("--encoding", choices=["float32", "pcm16"], default="float32")
    p.add_argument("--downmix", action="store_true")

    p = sub.add_parser("evaluate", help="gap-restricted SDR of a reconstruction")
    p.add_argument("reference")
    p.add_argument("estimate")
    p.add_argument("--mask", required=True)
    p.add_argument("--out", default=None, help="write per-gap rows as results CSV")
    p.add_argument("--signal-id", default=None)
    p.add_argument("--method-label", default="unknown")
    p.add_argument("--estimator-label", default="unknown")
    p.add_argument("--order-label", type=int, default=0)
    p.add_argument("--downmix", action="store_true")

    p = sub.add_parser("sweep", help="degrade/inpaint/evaluate a corpus over a parameter grid")
    p.add_argument("--corpus", required=True, help="directory of .wav files")
    p.add_argument("--out", required=True, help="results CSV")
    p.add_argument("--methods", type=_csv_list(str), default=["extrapolation", "gapwise", "framewise"])
    p.add_argument("--estimators", type=_csv_list(str), default=["lpc", "burg"])
    p.add_argument("--orders", type=_csv_list(int), default=[512, 1024, 2048],
                   help="comma-separated AR orders; the full grid is "
                        + ",".join(map(str, GRID_ORDERS)))
    p.add_argument("--gap-lengths", type=_csv_list(float),
                   default=[10, 20, 30, 40, 50, 60, 70, 80], help="gap lengths in ms")
    p.add_argument("--windows", type=_csv_list(str), default=["hann", "rect"])
    p.add_argument("--context", type=int, default=4096)
    p.add_argument("--frame", type=int, default=4096)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--masks-dir", default=None,
                   help="use <id>.<ms>ms.mask.json files from here instead of generating masks")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--record-time", action="store_true",
                   help="fill elapsed_s with wall time (output is then not byte-reproducible)")
    _add_gap_flags(p)

    p = sub.add_parser("synth", help="write a synthetic multi-sinusoid corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seconds", type=float, default=2.0)
    p.add_argument("--rate", type=int, default=44100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "degrade":
            return cmd_degrade(args)
        if args.command == "inpaint":
            return cmd_inpaint(args, parser)
        if args.command == "evaluate":
            return cmd_evaluate(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_synth(args)
    except (InpaintingError, OSError) as exc:
        print(f"arinpaint: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
