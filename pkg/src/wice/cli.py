"""Command-line experiment runner.

Subcommands: simulate, export-dataset, eval-predictions, complexity, tdr.
Exit code 0 on success; nonzero with a one-line diagnostic otherwise.
"""

import argparse
import sys

from . import metrics
from .config import ExperimentConfig
from .datasets import read_dataset, write_dataset
from .frames import FrameSpec, buffering_time, tdr
from .runner import eval_predictions, export_dataset, report_csv, simulate


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "frames", None) is not None:
        cfg.frames = args.frames
    if getattr(args, "snr", None):
        cfg.snr_db = [float(s) for s in args.snr.split(",")]
    if getattr(args, "estimators", None):
        cfg.estimators = [e.strip() for e in args.estimators.split(",")]
    if getattr(args, "workers", None) is not None:
        cfg.workers = args.workers
    cfg.validate()
    return cfg


def _write_out(text: str, out: str | None) -> None:
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    points = simulate(cfg)
    _write_out(report_csv(cfg, points), args.out)
    return 0


def cmd_export_dataset(args) -> int:
    cfg = _load_config(args)
    records = export_dataset(cfg, n_records=args.frames, snr_db=args.snr_db)
    write_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_eval_predictions(args) -> int:
    cfg = _load_config(args)
    dataset = read_dataset(args.dataset)
    predictions = read_dataset(args.predictions)
    points = eval_predictions(cfg, dataset, predictions, snr_db=args.snr_db)
    _write_out(report_csv(cfg, points), args.out)
    return 0


def cmd_complexity(args) -> int:
    params = metrics.ComplexityParams(
        k_on=args.k_on, k_p=args.k_p, k_d=args.k_d, n_symbols=args.i,
        n_pilot_syms=args.p, n_lp_pilots=args.l)
    lines = ["scheme,mul_div,sum_sub,total"]
    for scheme, ops in metrics.complexity_table(params).items():
        lines.append(f"{scheme},{ops.mul_div},{ops.sum_sub},{ops.total}")
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


def cmd_tdr(args) -> int:
    lines = ["structure,scheme,k_df,tdr_bits_per_s,gain_pct,phi_us"]
    layouts = [("standard", FrameSpec(n_symbols=args.i, mod_order=args.m))]
    for p in (1, 2, 3):
        for scheme in ("FP", "LP"):
            layouts.append((f"wi-{p}p", FrameSpec(n_symbols=args.i, n_pilot_syms=p,
                                                  scheme=scheme, n_lp_pilots=args.l,
                                                  mod_order=args.m)))
    for name, spec in layouts:
        rate, gain = tdr(spec)
        lines.append(f"{name},{spec.scheme if spec.n_pilot_syms else '-'},"
                     f"{spec.data_subcarriers_per_frame},{rate:.1f},{gain:.4f},"
                     f"{buffering_time(spec):g}")
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wice",
        description="Link-level simulator and channel estimators for "
                    "802.11p doubly selective vehicular channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", help="experiment config file (INI)")
            p.add_argument("--seed", type=int, help="master RNG seed")
        p.add_argument("--out", default="-", help="output path ('-' = stdout)")

    p = sub.add_parser("simulate", help="run a Monte-Carlo sweep, emit CSV")
    common(p)
    p.add_argument("--frames", type=int, help="frames per SNR point")
    p.add_argument("--snr", help="comma-separated SNR list in dB")
    p.add_argument("--estimators", help="comma-separated estimator tokens")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export-dataset", help="write training pairs to a container file")
    common(p)
    p.add_argument("--frames", type=int, help="number of records")
    p.add_argument("--snr-db", type=float, help="export SNR (dB)")
    p.set_defaults(func=cmd_export_dataset)

    p = sub.add_parser("eval-predictions",
                       help="score a predictions container against its dataset")
    common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--snr-db", type=float, help="SNR the dataset was exported at")
    p.set_defaults(func=cmd_eval_predictions)

    p = sub.add_parser("complexity", help="operation-count table for all schemes")
    common(p, config=False)
    p.add_argument("--k-on", type=int, default=52)
    p.add_argument("--k-p", type=int, default=4)
    p.add_argument("--k-d", type=int, default=48)
    p.add_argument("--i", type=int, default=100)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--l", type=int, default=12)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("tdr", help="data-rate and buffering-time table")
    common(p, config=False)
    p.add_argument("--i", type=int, default=100)
    p.add_argument("--l", type=int, default=12)
    p.add_argument("--m", type=int, default=4)
    p.set_defaults(func=cmd_tdr)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # single-line diagnostic, nonzero exit
        print(f"wice: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
